#!/usr/bin/env python3
"""Download the face-to-face contact recordings used by the acceptance
suite into data/.  Requires ordinary network access.

Sources (SocioPatterns collaboration, CC BY-SA):
  - Primary school temporal network (first file, two school days)
  - Hospital ward dynamic contact network
"""

import sys
import urllib.request
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"

FILES = {
    "primaryschool.csv.gz": "http://www.sociopatterns.org/wp-content/uploads/2015/09/primaryschool.csv.gz",
    "detailed_list_of_contacts_Hospital.dat.gz": "http://www.sociopatterns.org/wp-content/uploads/2013/09/detailed_list_of_contacts_Hospital.dat_.gz",
}


def main() -> int:
    DATA.mkdir(exist_ok=True)
    failures = 0
    for name, url in FILES.items():
        dest = DATA / name
        if dest.exists():
            print(f"{name}: already present")
            continue
        print(f"{name}: fetching {url}")
        try:
            urllib.request.urlretrieve(url, dest)
            print(f"{name}: {dest.stat().st_size} bytes")
        except OSError as exc:
            failures += 1
            print(f"{name}: FAILED ({exc})", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
