"""Errors raised across the simulation and estimation pipeline."""
from typing import Optional


class DapsBaseError(ValueError):
    """Base Error Class for all dapsim errors.

    Args:
        section (:obj:`str`, optional): The config section (or module
            area) the error relates to.
        field (:obj:`str`, optional): The config field or argument name
            which caused the failure.
        setting (:obj:`int`, optional): The index of the LO setting
            being processed when the error occurred.

    """

    _code: Optional[str] = None
    _identifier = "base"

    def __init__(
        self,
        *args,
        section: Optional[str] = None,
        field: Optional[str] = None,
        setting: Optional[int] = None,
        **kwargs
    ):
        self.section = section
        self.field = field
        self.setting = setting
        super().__init__(*args, **kwargs)

    def error_code(self) -> str:
        """Fetch the short code for this class of error."""
        return self._code or "????"

    def location(self) -> str:
        """A compact description of where the error came from."""
        parts = []
        if self.section:
            parts.append(f"[{self.section}]")
        if self.field:
            parts.append(self.field)
        if self.setting is not None:
            parts.append(f"setting #{self.setting}")
        return " ".join(parts)

    def desc(self) -> str:
        """Fetch a description of this error."""
        if len(self.args) >= 1:
            return str(self.args[0])
        return self.__class__.__name__

    def get_info_dict(self) -> dict:
        """Return a dict of properties.

        This is useful in the API and the CLI for outputting errors.
        """
        return {
            "code": self.error_code(),
            "identifier": self._identifier,
            "section": self.section,
            "field": self.field,
            "setting": self.setting,
            "description": self.desc(),
        }


class DapsConfigError(DapsBaseError):
    """The configuration is invalid or does not match the schema."""

    _code = "CFG"
    _identifier = "config"


class DapsValueError(DapsBaseError):
    """An argument is outside the domain an operation supports."""

    _code = "VAL"
    _identifier = "value"


class DapsDataError(DapsBaseError):
    """A dataset or report is malformed or inconsistent.

    Raised for schema mismatches when reading files, for grids which
    don't line up between datasets and for missing vacuum scans.
    """

    _code = "DAT"
    _identifier = "data"


class DapsNumericError(DapsBaseError):
    """A numerical procedure failed to meet its accuracy contract."""

    _code = "NUM"
    _identifier = "numeric"


class DapsTruncationError(DapsNumericError):
    """The Fock truncation leaves too much probability in the tail.

    Args:
        tail_mass (:obj:`float`): The probability outside the
            truncated space which triggered the failure.

    """

    _identifier = "truncation"

    def __init__(self, *args, tail_mass: float = 0.0, **kwargs):
        self.tail_mass = tail_mass
        super().__init__(*args, **kwargs)

    def get_info_dict(self) -> dict:
        """Return a dict of properties, including the tail mass."""
        info = super().get_info_dict()
        info["tail_mass"] = self.tail_mass
        return info


class DapsConvergenceError(DapsNumericError):
    """An iterative method or quadrature did not converge."""

    _identifier = "convergence"

    def __init__(self, *args, iterations: Optional[int] = None, **kwargs):
        self.iterations = iterations
        super().__init__(*args, **kwargs)
