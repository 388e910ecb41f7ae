"""Built-in fixture surfaces.

Set ``FLATSURF_FIXTURES`` to a directory of ``NAME.surf`` files to override
or extend the built-in library.
"""

from __future__ import annotations

import os
from pathlib import Path

from .fileformat import parse, to_surface

DOCUMENTS = {
    "T1": """\
field rational
name T1
polygon S { (0,0) (1,0) (1,1) (0,1) }
glue S.e0 ~ S.e2
glue S.e1 ~ S.e3
""",
    # two unit squares in a row with one square on top of the left one
    "L3": """\
field rational
name L3
polygon R { (0,0) (1,0) (2,0) (2,1) (1,1) (0,1) }
polygon Q { (0,1) (1,1) (1,2) (0,2) }
glue R.e0 ~ Q.e2
glue R.e1 ~ R.e3
glue R.e4 ~ Q.e0
glue R.e2 ~ R.e5
glue Q.e1 ~ Q.e3
""",
    # golden L: bottom a x 1, top 1 x (a-1), a = (1+sqrt5)/2
    "LG": """\
field sqrt 5
name LG
polygon R { (0,0) (1,0) (1/2+1/2*r,0) (1/2+1/2*r,1) (1,1) (0,1) }
polygon Q { (0,1) (1,1) (1,1/2+1/2*r) (0,1/2+1/2*r) }
glue R.e0 ~ Q.e2
glue R.e1 ~ R.e3
glue R.e4 ~ Q.e0
glue R.e2 ~ R.e5
glue Q.e1 ~ Q.e3
""",
    # bottom 2 x 1, top sqrt2 x sqrt2
    "LQ2": """\
field sqrt 2
name LQ2
polygon R { (0,0) (r,0) (2,0) (2,1) (r,1) (0,1) }
polygon Q { (0,1) (r,1) (r,1+r) (0,1+r) }
glue R.e0 ~ Q.e2
glue R.e1 ~ R.e3
glue R.e4 ~ Q.e0
glue R.e2 ~ R.e5
glue Q.e1 ~ Q.e3
""",
    "O8": """\
field sqrt 2
name O8
polygon P { (0,0) (1,0) (1+1/2*r,1/2*r) (1+1/2*r,1+1/2*r) (1,1+r) (0,1+r) (-1/2*r,1+1/2*r) (-1/2*r,1/2*r) }
glue P.e0 ~ P.e4
glue P.e1 ~ P.e5
glue P.e2 ~ P.e6
glue P.e3 ~ P.e7
""",
    # bottom 2 x 1, top 1 x sqrt2: has periodic directions that are not
    # completely periodic, used for the teepee experiments
    "LX": """\
field sqrt 2
name LX
polygon R { (0,0) (1,0) (2,0) (2,1) (1,1) (0,1) }
polygon Q { (0,1) (1,1) (1,1+r) (0,1+r) }
glue R.e0 ~ Q.e2
glue R.e1 ~ R.e3
glue R.e4 ~ Q.e0
glue R.e2 ~ R.e5
glue Q.e1 ~ Q.e3
""",
    # two unit tori cross-glued along the slit [0,1/2] x {0}
    "SPLIT": """\
field rational
name SPLIT
polygon A { (0,0) (1/2,0) (1,0) (1,1) (1/2,1) (0,1) }
polygon B { (0,0) (1/2,0) (1,0) (1,1) (1/2,1) (0,1) }
glue A.e0 ~ B.e4
glue B.e0 ~ A.e4
glue A.e1 ~ A.e3
glue B.e1 ~ B.e3
glue A.e2 ~ A.e5
glue B.e2 ~ B.e5
""",
}

NAMES = tuple(DOCUMENTS)


def fixture_text(name: str) -> str:
    root = os.environ.get("FLATSURF_FIXTURES")
    if root:
        path = Path(root) / f"{name}.surf"
        if path.exists():
            return path.read_text()
    return DOCUMENTS[name]


def fixture_document(name: str):
    return parse(fixture_text(name))


def fixture(name: str):
    return to_surface(fixture_document(name))
