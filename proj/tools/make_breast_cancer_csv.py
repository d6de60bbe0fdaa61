#!/usr/bin/env python3
# Copyright 2026 The mqscan Authors.
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

"""Regenerate data/breast_cancer.csv from the copy of the Wisconsin Diagnostic
Breast Cancer table bundled with scikit-learn."""
import sys

from sklearn.datasets import load_breast_cancer


def main(path):
    d = load_breast_cancer()
    names = [n.replace(" ", "_") for n in d.feature_names]
    with open(path, "w") as f:
        f.write(",".join(["id", "label"] + names) + "\n")
        for i, (x, t) in enumerate(zip(d.data, d.target)):
            label = "Benign" if t == 1 else "Malignant"
            f.write(",".join([str(i), label] + [repr(float(v)) for v in x]) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/breast_cancer.csv")
