# Copyright 2026 The missshap Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the 6x6 centre crop of scikit-learn's bundled 8x8 digits as CSV.

Keeps the first 500 rows; pixel columns are p<row><col> over the crop and the
label column is "digit".
"""

import csv
import sys

from sklearn.datasets import load_digits


def main(path: str) -> None:
    digits = load_digits()
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([f"p{r}{c}" for r in range(6) for c in range(6)] + ["digit"])
        for img, label in zip(digits.images[:500], digits.target[:500]):
            crop = img[1:7, 1:7]
            w.writerow([f"{v:g}" for v in crop.ravel()] + [int(label)])


if __name__ == "__main__":
    main(sys.argv[1])
