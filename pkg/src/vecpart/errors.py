"""Exception types raised by the library, each with a stable CLI exit code."""


class VecpartError(Exception):
    """Base class for all vecpart errors."""

    exit_code = 1


class MalformedLine(VecpartError):
    """An input line does not match the expected format."""

    exit_code = 10


class NonPositiveWeight(VecpartError):
    """An edge weight is zero, negative, or not a number."""

    exit_code = 11


class SelfLoop(VecpartError):
    """An input edge connects a node to itself."""

    exit_code = 12


class Disconnected(VecpartError):
    """The graph has more than one connected component."""

    exit_code = 13


class ConflictingDuplicateEdge(VecpartError):
    """The same edge appears twice with different weights."""

    exit_code = 14


class AsymmetricEdgeList(VecpartError):
    """A directed edge list is missing the reverse orientation of an edge."""

    exit_code = 15


class MissingCommunityLabel(VecpartError):
    """A node has no ground-truth community label."""

    exit_code = 16


class GenerationFailed(VecpartError):
    """A random graph generator could not produce a connected sample."""

    exit_code = 17


class ZeroDegree(VecpartError):
    """A node with zero degree makes the random-walk operator undefined."""

    exit_code = 20


class EigensolverFailure(VecpartError):
    """The eigenvalue solver did not converge."""

    exit_code = 21


class DimOutOfRange(VecpartError):
    """Requested embedding dimension is outside [1, n - 1]."""

    exit_code = 22


class ModeBasisMismatch(VecpartError):
    """Embedding mode is incompatible with the spectral basis source."""

    exit_code = 23


class SizeMismatch(VecpartError):
    """Two objects that must cover the same node set have different sizes."""

    exit_code = 24


class NonEuclideanEmbedding(VecpartError):
    """Operation requires a Euclidean (all-positive signature) embedding."""

    exit_code = 25


class SameGroup(VecpartError):
    """Source and target group of a move are identical."""

    exit_code = 26


class LevelCapExceeded(VecpartError):
    """The aggregation loop hit its safety cap without converging."""

    exit_code = 27


class TooLarge(VecpartError):
    """Instance too large for exhaustive enumeration."""

    exit_code = 28
