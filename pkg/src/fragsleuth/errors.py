"""Exception hierarchy.

Every error carries a machine-parsable ``category`` and the process exit
code the CLI maps it to: 1 I/O, 2 environment/tooling, 3 data
insufficiency, 4 contract mismatch.
"""


class FragsleuthError(Exception):
    category = "error"
    exit_code = 1


class EnvironmentError_(FragsleuthError):
    category = "environment"
    exit_code = 2


class ToolNotFound(EnvironmentError_):
    """No adapter route (template, builtin, or PATH binary) for a tool."""


class ToolFailed(EnvironmentError_):
    """External compressor exited nonzero; message carries diagnostics."""


class DataError(FragsleuthError):
    category = "data-insufficiency"
    exit_code = 3


class InsufficientSamples(DataError):
    def __init__(self, label: str, have: int, need: int):
        super().__init__(f"class {label!r} has {have} chunks, need {need}")
        self.label = label
        self.have = have
        self.need = need


class InsufficientData(DataError):
    pass


class EmptyGroup(DataError):
    pass


class EmptySet(DataError):
    pass


class ContractError(FragsleuthError):
    category = "contract"
    exit_code = 4


class ShapeMismatch(ContractError):
    pass


class OddSpatialDim(ContractError):
    pass


class LabelOutOfRange(ContractError):
    pass


class MissingGradient(ContractError):
    pass


class BadLength(ContractError):
    pass


class UnknownTest(ContractError):
    pass


class SequenceTooShort(ContractError):
    pass


class DomainError(ContractError):
    pass


class UnknownLabel(ContractError):
    pass


class CheckpointError(ContractError):
    pass


class BadMagic(CheckpointError):
    pass


class VersionMismatch(CheckpointError):
    pass


class TruncatedFile(CheckpointError):
    pass


class ClassTableMismatch(ContractError):
    pass
