"""Error hierarchy for seqrec

Every error carries the CLI exit code it maps to, so the command layer never
has to know which module raised it.
"""

from typing import Any, List, Optional


class SeqRecError(Exception):
    """Base exception for seqrec errors"""

    exit_code: int = 1


# ============ Ingest ============

class ParseError(SeqRecError):
    """Malformed input row"""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        location = ""
        if path is not None:
            location += f"{path}"
        if line is not None:
            location += f":{line}" if location else f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)


class UnknownPoi(SeqRecError):
    """A trajectory references a POI missing from the POI file"""

    exit_code = 2

    def __init__(self, poi_id: Any, line: Optional[int] = None):
        self.poi_id = poi_id
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"Unknown POI {poi_id!r}{where}")


class TooFewExamples(SeqRecError):
    """Dataset too small for the requested split"""


class EmptyDataset(SeqRecError):
    """Operation needs at least one example"""

    exit_code = 3


class DegenerateClustering(UserWarning):
    """Fewer distinct coordinates than requested clusters; cluster count was reduced"""


# ============ Decoding ============

class NonConforming(SeqRecError):
    """Trajectory does not match its query (start or length)"""


class SearchExhausted(SeqRecError):
    """List Viterbi ran out of heap entries or expansions before finding enough sequences"""

    exit_code = 3

    def __init__(self, message: str, partial: Optional[List[Any]] = None, query: Any = None):
        self.partial = list(partial or [])
        self.query = query
        super().__init__(message)


class Infeasible(SeqRecError):
    """No loop-free path of the requested length exists"""

    exit_code = 4


class TooLarge(SeqRecError):
    """POI universe too large for the in-process exact path engine"""

    exit_code = 4


# ============ Learning ============

class NonPositiveC(SeqRecError):
    """Regularisation constant must be positive"""

    exit_code = 3


class NoPairs(SeqRecError):
    """No strict POI count inequality anywhere in the training data"""

    exit_code = 3


# ============ Evaluation ============

class DegenerateDenominator(SeqRecError):
    """Kendall tau-b denominator is zero (every item pair tied)"""
