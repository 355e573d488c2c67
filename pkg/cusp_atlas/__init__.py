"""Classification of abelian subgroups of PGL4(R) and of 2-dimensional cusp Lie groups."""

from cusp_atlas.core.config import settings

__version__ = settings.VERSION
