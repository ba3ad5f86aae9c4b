"""Error types shared by every stage of the pipeline.

Each error carries a short machine-readable ``code`` (``PARSE_ERROR``,
``CROSSING_ARCS``, ...) and an ``exit_code`` used by the command line.
"""


class CarrierError(Exception):
    """A validation failure in one of the input objects."""

    exit_code = 2

    def __init__(self, code, message=""):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}" if message else code)


class OvertwistedHint(CarrierError):
    """Closed dividing curves on a face: the structure cannot be tight."""

    exit_code = 3

    def __init__(self, message=""):
        super().__init__("OVERTWISTED_HINT", message)


class PropertyFailure(CarrierError):
    """An oracle disagreement or a violated bound."""

    exit_code = 4
