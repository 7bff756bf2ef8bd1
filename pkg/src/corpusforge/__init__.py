"""corpusforge: text mining for conference proceedings.

Corpus formats, title/abstract/reference extraction, fuzzy citation
matching, word and sentence vector search, topic modeling, and
citation/bipartite graph analytics, exposed as a library, a CLI, and an
HTTP service.
"""

from corpusforge._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
