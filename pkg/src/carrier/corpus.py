"""Bundled example files.

Names may be given with or without a directory; the command line falls
back to these when a path does not exist on disk.
"""

from importlib.resources import files
from pathlib import Path

from .branched import load_branched
from .diophantine import load_equations
from .dividing import load_dividing
from .lutz import load_plan
from .tri import load_triangulation

# closed complexes shipped with the package
BRANCHED = ("flap-torus", "torus", "klein", "sphere", "two-tet")
# built from triangulations with tight-looking dividing sets
CONTACT_DERIVED = (("single-tet", "single-tet"), ("two-tet", "two-tet"))
# complexes whose basis surfaces are not all tori or Klein bottles
NON_TORIC = ("sphere", "two-tet")


def names(suffix=None):
    out = sorted(p.name for p in files("carrier.data").iterdir() if "." in p.name
                 and not p.name.endswith(".py"))
    return [n for n in out if suffix is None or n.endswith(suffix)]


def resolve(name):
    """Path on disk if it exists, else the bundled file of that name."""
    p = Path(name)
    if p.exists():
        return p
    bundled = files("carrier.data").joinpath(p.name)
    if bundled.is_file():
        return bundled
    raise FileNotFoundError(name)


def text(name):
    return resolve(name).read_text()


def triangulation(name):
    return load_triangulation(text(name if "." in name else name + ".tri"))


def dividing(tri_name, div_name=None):
    T = triangulation(tri_name)
    div_name = div_name or tri_name
    return T, load_dividing(T, text(div_name if "." in div_name else div_name + ".div"))


def branched(name):
    return load_branched(text(name if "." in name else name + ".bs"))


def equations(name):
    return load_equations(text(name if "." in name else name + ".eqs"))


def plan(name):
    return load_plan(text(name if "." in name else name + ".plan"))
