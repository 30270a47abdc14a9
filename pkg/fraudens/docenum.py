# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# docenum - Enum subclasses that carry a doc string per member
#
# Part of the fraudens hybrid ensemble fraud detection package
#
# Python Compatibility: Requires Python 3.8 or later
# Doc Environment: Sphinx with autodoc, autosummary, napoleon, and autoenum
#
# -----------------------------------------------------------------------------
# MIT License - see LICENSE.txt
# -----------------------------------------------------------------------------
# Edit History:
# 17-Oct-26 Initial edit
# 17-Oct-26 Add DocStrEnum for values that appear in config and JSON files
# -----------------------------------------------------------------------------

from enum import Enum, IntEnum

class DocIntEnum(IntEnum):
    """IntEnum whose members may carry their own documentation

    Example:
        ::

            class ExitStatus(DocIntEnum):
                \"\"\"Process exit status\"\"\"
                OK       = 0, 'Success'
                USAGE    = 1, 'Bad flags or configuration'

    The docs are picked up by ``enum_tools.autoenum`` in the Sphinx build.

    """
    def __new__(cls, value, doc=None):
        self = int.__new__(cls, value)  # super().__new__(value) fails here
        self._value_ = value
        if doc is not None:
            self.__doc__ = doc
        return self

class DocStrEnum(str, Enum):
    """String valued counterpart of :class:`DocIntEnum`

    Members compare equal to their text value, so they can be written to
    and read from YAML and JSON documents unchanged.

    Example:
        ::

            class ModelKind(DocStrEnum):
                \"\"\"Base learner families\"\"\"
                DT  = 'dt', 'CART decision tree'
                KNN = 'knn', 'k nearest neighbours'

    """
    def __new__(cls, value, doc=None):
        self = str.__new__(cls, value)
        self._value_ = value
        if doc is not None:
            self.__doc__ = doc
        return self

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str):
        """Look up a member by its value, case-insensitively.

        Raises:
            ValueError: If no member has that value. The message lists the
                accepted values.

        """
        for member in cls:
            if member.value == str(text).lower():
                return member
        choices = ", ".join(m.value for m in cls)
        raise ValueError(f"'{text}' is not one of: {choices}")
