"""Exception hierarchy shared by all facetlab modules."""


class FacetlabError(Exception):
    """Base class for every error raised by this package."""


class ParseError(FacetlabError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class EmptyFacet(FacetlabError):
    def __init__(self, row: int):
        super().__init__(f"row {row} has no vertex (facets of a pointed polyhedron contain a vertex)")
        self.row = row


class OutOfRange(FacetlabError, IndexError):
    pass


class ResourceLimit(FacetlabError):
    pass


class NotAMember(FacetlabError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotMaximum(FacetlabError):
    pass


class NoEdgeFound(FacetlabError):
    pass


class BadParameters(FacetlabError, ValueError):
    pass


class NotSimple(FacetlabError):
    pass


class Degenerate(FacetlabError):
    pass


class PreconditionFailed(FacetlabError):
    pass


class Ambiguous(FacetlabError):
    pass


class NoArrangement(FacetlabError):
    pass


class UnboundedInput(FacetlabError, ValueError):
    pass


class BadFarFace(FacetlabError, ValueError):
    pass


class GrammarError(FacetlabError, ValueError):
    def __init__(self, pos: int, reason: str):
        super().__init__(f"position {pos}: {reason}")
        self.pos = pos
        self.reason = reason
