#!/usr/bin/env python3
# Copyright 2026 The divminer Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Fetches the raw COMPAS and Law School files into data/.

Both files ship inside wheels on PyPI, so this only needs pip:
  compas-scores-two-years.csv  responsibly 0.1.2 (ProPublica export)
  law.csv                      ethicml 1.3.0 (law_data.csv preparation,
                               one-hot race/sex columns)

The files are not redistributed with this repository. Run
`divminer prepare compas|lawschool` on them afterwards.
"""

import argparse
import hashlib
import io
import pathlib
import subprocess
import sys
import tempfile
import zipfile

SOURCES = [
    # (wheel requirement, member path, output name, extract a nested zip)
    ("responsibly==0.1.2", "responsibly/dataset/compas/compas-scores-two-years.csv",
     "compas-scores-two-years.csv", False),
    ("ethicml==1.3.0", "ethicml/data/csvs/law.csv.zip", "law.csv", True),
]


def download_wheel(requirement, dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
         "--timeout", "120", "--disable-pip-version-check", "--dest", str(dest), requirement],
        check=True, stdout=subprocess.DEVNULL)
    name = requirement.split("==")[0].lower()
    wheels = [w for w in dest.glob("*.whl") if w.name.lower().startswith(name)]
    if not wheels:
        raise SystemExit(f"no wheel downloaded for {requirement}")
    return wheels[0]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    default_out = pathlib.Path(__file__).resolve().parent.parent / "data"
    parser.add_argument("--out", type=pathlib.Path, default=default_out)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        for requirement, member, output, nested in SOURCES:
            target = args.out / output
            if target.exists():
                print(f"{target} exists, skipping")
                continue
            wheel = download_wheel(requirement, pathlib.Path(tmp))
            data = zipfile.ZipFile(wheel).read(member)
            if nested:
                inner = zipfile.ZipFile(io.BytesIO(data))
                data = inner.read(inner.namelist()[0])
            target.write_bytes(data)
            digest = hashlib.sha256(data).hexdigest()[:16]
            print(f"wrote {target} ({len(data)} bytes, sha256 {digest}...)")


if __name__ == "__main__":
    main()
