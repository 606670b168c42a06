"""Finite specialization posets and semilattices, closure spaces, and the
embeddings between them."""
from .closure import (ClosureSpace, ClosureSpecView, PointMap, closure_of,
                      complete_family, is_continuous, spec_of, ternary_model,
                      topology_tag)
from .embed import (StructMap, adjoin_zero, alt_principalize, downset_embed,
                    poset_topologize, principalize, quotient, topologize,
                    topologize_full, verify_map)
from .errors import SpectopoError
from .finorder import (Carrier, JoinSemilattice, Poset, Relation,
                       joins_from_order, poset_from_covers,
                       semilattice_from_covers)
from .folang import builtin, evaluate, parse
from .spec import (SpecPoset, SpecSemilattice, check_axioms,
                   close_specialization, compute_kmap, from_operator,
                   is_additive)
from .sst import format_document, parse_document

__version__ = "0.1.0"
