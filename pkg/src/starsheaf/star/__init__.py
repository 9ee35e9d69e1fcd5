"""Sheaves of G-sets satisfying the inertia condition, and their calculus."""

from .functors import *  # noqa: F401,F403
from .functors import StarContext, NotStar, OpenPresheaf, PresheafMorphism
from .components import *  # noqa: F401,F403
from .classify import *  # noqa: F401,F403
from .adjunctions import *  # noqa: F401,F403
