"""
Exception Classes for trajectory-grpo-kit

This module provides the exception hierarchy for every error scenario in the
package. Each exception carries a human-readable message plus a context dict
naming the offending input (field, key, line, rollout/step, iteration).

Exception Hierarchy:
    TrajKitError (base)
    ├── InvalidInputError
    ├── GeometryError (base)
    │   ├── InvalidRotationError
    │   ├── AmbiguousLogError
    │   └── EncodingError
    ├── TrajectoryIOError (base)
    │   ├── TrajectoryParseError
    │   └── TrajectoryValidationError
    ├── ConfigError
    ├── SamplingError (base)
    │   └── DegenerateSupportError
    ├── OptimizationError (base)
    │   ├── NumericalError
    │   └── NonFiniteGradientError
    └── CheckpointError (base)
        └── CheckpointVersionError

Usage Examples:
    >>> raise InvalidInputError(field_name="n", value=1, expected="n >= 2")
    >>> raise TrajectoryParseError(line_number=3, line="0 1 2", reason="expected 8 fields")
    >>> raise ConfigError(key="group_size", value="0", reason="must be >= 2")
"""

from typing import Optional, Dict, Any


# ============================================================================
# BASE EXCEPTION
# ============================================================================

class TrajKitError(Exception):
    """Base exception class for all trajectory-grpo-kit errors.

    Attributes:
        message (str): Human-readable error message
        context (dict): Additional context information about the error
        original_error (Exception, optional): Original exception that caused this error

    Examples:
        >>> try:
        ...     parse_trajectory(stream)
        ... except ValueError as e:
        ...     raise TrajKitError(
        ...         message="Trajectory could not be read",
        ...         context={"path": "target.txt"},
        ...         original_error=e
        ...     )

    Note:
        - All package exceptions inherit from this class
        - ``str(error)`` is the bare message; ``args[0]`` holds message + context
    """
    __slots__ = ['message', 'context', 'original_error']

    def __init__(
        self,
        message: str,
        context: Optional[Dict[str, Any]] = None,
        original_error: Optional[Exception] = None
    ):
        self.message = message
        self.context = context or {}
        self.original_error = original_error

        full_message = message
        if context:
            context_str = ", ".join(f"{k}={v}" for k, v in context.items())
            full_message = f"{message} | Context: {context_str}"

        if original_error:
            full_message = f"{full_message} | Original: {type(original_error).__name__}: {str(original_error)}"

        super().__init__(full_message)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(message={self.message!r}, context={self.context})"

    def __str__(self) -> str:
        return self.message


# ============================================================================
# INPUT VALIDATION ERRORS
# ============================================================================

class InvalidInputError(TrajKitError):
    """Exception raised when a function receives an invalid argument.

    Attributes:
        field_name (str): Name of the argument that failed validation
        value: The invalid value that was provided
        expected (str): Description of what was expected
        received (str): Description of what was actually received

    Examples:
        >>> if n < 2:
        ...     raise InvalidInputError(
        ...         field_name="n",
        ...         value=n,
        ...         expected="frame count >= 2",
        ...     )
    """
    __slots__ = ['field_name', 'value', 'expected', 'received']

    def __init__(
        self,
        field_name: str,
        value: Any = None,
        expected: Optional[str] = None,
        received: Optional[str] = None,
        message: Optional[str] = None
    ):
        self.field_name = field_name
        self.value = value
        self.expected = expected
        self.received = received

        if message is None:
            message_parts = [f"Invalid value for field '{field_name}'"]
            if value is not None:
                message_parts.append(f"received: {value}")
            if expected:
                message_parts.append(f"expected: {expected}")
            if received:
                message_parts.append(f"got: {received}")
            message = " | ".join(message_parts)

        context = {
            "field_name": field_name,
            "value": value,
            "expected": expected,
            "received": received
        }

        super().__init__(message=message, context=context)


# ============================================================================
# GEOMETRY ERRORS
# ============================================================================

class GeometryError(TrajKitError):
    """Base exception class for rigid-body math failures."""
    __slots__ = ['operation']

    def __init__(
        self,
        message: str = "Geometry operation failed",
        operation: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
        original_error: Optional[Exception] = None
    ):
        self.operation = operation
        full_context = context or {}
        if operation:
            full_context["operation"] = operation
        super().__init__(message=message, context=full_context, original_error=original_error)


class InvalidRotationError(GeometryError):
    """Raised when a matrix is not a proper rotation.

    Attributes:
        orthonormality_error (float): max |mᵀm − I| entry
        determinant (float): det(m)
    """
    __slots__ = ['orthonormality_error', 'determinant']

    def __init__(
        self,
        orthonormality_error: float,
        determinant: float,
        tolerance: float,
        operation: Optional[str] = None
    ):
        self.orthonormality_error = orthonormality_error
        self.determinant = determinant
        super().__init__(
            message=(
                f"Matrix is not a rotation: max|mᵀm − I| = {orthonormality_error:.3e}, "
                f"det = {determinant:.6f} (tolerance {tolerance:.0e})"
            ),
            operation=operation,
            context={
                "orthonormality_error": orthonormality_error,
                "determinant": determinant,
                "tolerance": tolerance,
            },
        )


class AmbiguousLogError(GeometryError):
    """Raised when a rotation sits too close to angle π for a unique logarithm.

    Attributes:
        frame_index (int, optional): Frame whose rotation is ambiguous
        angle (float): Rotation angle in radians
    """
    __slots__ = ['frame_index', 'angle']

    def __init__(
        self,
        angle: float,
        frame_index: Optional[int] = None,
        operation: Optional[str] = None,
        message: Optional[str] = None
    ):
        self.frame_index = frame_index
        self.angle = angle
        if message is None:
            where = f"frame {frame_index}" if frame_index is not None else "rotation"
            message = f"Logarithm ill-defined for {where}: angle {angle:.9f} rad is within tolerance of π"
        context: Dict[str, Any] = {"angle": angle}
        if frame_index is not None:
            context["frame_index"] = frame_index
        super().__init__(message=message, operation=operation, context=context)


class EncodingError(GeometryError):
    """Raised when a trajectory cannot be encoded into a flat latent."""
    __slots__ = ['frame_index', 'angle']

    def __init__(self, frame_index: int, angle: float, limit: float):
        self.frame_index = frame_index
        self.angle = angle
        super().__init__(
            message=(
                f"Cannot encode frame {frame_index}: rotation angle {angle:.6f} rad "
                f"exceeds the latent limit {limit:.6f} rad"
            ),
            operation="encode",
            context={"frame_index": frame_index, "angle": angle, "limit": limit},
        )


# ============================================================================
# TRAJECTORY I/O ERRORS
# ============================================================================

class TrajectoryIOError(TrajKitError):
    """Base exception class for trajectory file errors.

    Attributes:
        source (str, optional): File name or stream description
    """
    __slots__ = ['source']

    def __init__(
        self,
        message: str = "Trajectory I/O failed",
        source: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
        original_error: Optional[Exception] = None
    ):
        self.source = source
        full_context = context or {}
        if source:
            full_context["source"] = source
        super().__init__(message=message, context=full_context, original_error=original_error)


class TrajectoryParseError(TrajectoryIOError):
    """Raised when a trajectory line cannot be parsed.

    Attributes:
        line_number (int): 1-based line number in the input
        line (str): Offending line text

    Examples:
        >>> raise TrajectoryParseError(
        ...     line_number=4,
        ...     line="0.1 0 0",
        ...     reason="expected 8 fields, found 3"
        ... )
    """
    __slots__ = ['line_number', 'line']

    def __init__(
        self,
        line_number: int,
        line: str,
        reason: str,
        source: Optional[str] = None,
        original_error: Optional[Exception] = None
    ):
        self.line_number = line_number
        self.line = line
        super().__init__(
            message=f"Malformed trajectory line {line_number}: {reason}",
            source=source,
            context={"line_number": line_number, "line": line.strip()},
            original_error=original_error,
        )


class TrajectoryValidationError(TrajectoryIOError):
    """Raised when parsed records violate Trajectory invariants."""
    __slots__ = ['line_number']

    def __init__(
        self,
        message: str,
        line_number: Optional[int] = None,
        source: Optional[str] = None
    ):
        self.line_number = line_number
        context: Dict[str, Any] = {}
        if line_number is not None:
            context["line_number"] = line_number
        super().__init__(message=message, source=source, context=context)


# ============================================================================
# CONFIGURATION ERRORS
# ============================================================================

class ConfigError(TrajKitError):
    """Raised for unknown, duplicate, unparsable or out-of-range config keys.

    Attributes:
        key (str): Configuration key at fault
        value: Raw value (if any)
        line_number (int, optional): Line in the config text

    Examples:
        >>> raise ConfigError(key="group_size", value="0", reason="must be >= 2")
    """
    __slots__ = ['key', 'value', 'line_number']

    def __init__(
        self,
        key: str,
        reason: str,
        value: Any = None,
        line_number: Optional[int] = None
    ):
        self.key = key
        self.value = value
        self.line_number = line_number
        context: Dict[str, Any] = {"key": key}
        if value is not None:
            context["value"] = value
        if line_number is not None:
            context["line_number"] = line_number
        super().__init__(message=f"Config key '{key}': {reason}", context=context)


# ============================================================================
# SAMPLING ERRORS
# ============================================================================

class SamplingError(TrajKitError):
    """Base exception class for random-sampling failures."""


class DegenerateSupportError(SamplingError):
    """Raised when a truncated Gaussian has numerically empty support.

    Attributes:
        mass (float): Φ(β) − Φ(α), the probability of the interval
    """
    __slots__ = ['mass']

    def __init__(self, mu: float, sigma: float, a: float, b: float, mass: float):
        self.mass = mass
        super().__init__(
            message=(
                f"Truncated Gaussian N({mu}, {sigma}²) on [{a}, {b}] has degenerate "
                f"support (interval mass {mass:.3e})"
            ),
            context={"mu": mu, "sigma": sigma, "a": a, "b": b, "mass": mass},
        )


# ============================================================================
# OPTIMIZATION ERRORS
# ============================================================================

class OptimizationError(TrajKitError):
    """Base exception class for training failures."""


class NumericalError(OptimizationError):
    """Raised when an importance ratio or loss term is not finite.

    Attributes:
        rollout (int): Rollout index j (0-based)
        step (int): Active-step index within the window (0-based)
    """
    __slots__ = ['rollout', 'step']

    def __init__(self, rollout: int, step: int, quantity: str = "importance ratio"):
        self.rollout = rollout
        self.step = step
        super().__init__(
            message=f"Non-finite {quantity} at rollout {rollout}, step {step}",
            context={"rollout": rollout, "step": step, "quantity": quantity},
        )


class NonFiniteGradientError(OptimizationError):
    """Raised when a parameter gradient contains NaN or inf.

    Attributes:
        iteration (int): Training iteration at which the gradient went bad
    """
    __slots__ = ['iteration', 'phase']

    def __init__(self, iteration: int, phase: str = "grpo"):
        self.iteration = iteration
        self.phase = phase
        super().__init__(
            message=f"Non-finite gradient during {phase} at iteration {iteration}; aborting",
            context={"iteration": iteration, "phase": phase},
        )


# ============================================================================
# CHECKPOINT ERRORS
# ============================================================================

class CheckpointError(TrajKitError):
    """Base exception class for checkpoint read/write failures."""
    __slots__ = ['path']

    def __init__(
        self,
        message: str = "Checkpoint operation failed",
        path: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
        original_error: Optional[Exception] = None
    ):
        self.path = path
        full_context = context or {}
        if path:
            full_context["path"] = path
        super().__init__(message=message, context=full_context, original_error=original_error)


class CheckpointVersionError(CheckpointError):
    """Raised when a checkpoint has the wrong magic string or layout version."""
    __slots__ = ['found', 'expected']

    def __init__(self, found: Any, expected: Any, path: Optional[str] = None):
        self.found = found
        self.expected = expected
        super().__init__(
            message=f"Checkpoint version mismatch: found {found!r}, expected {expected!r}",
            path=path,
            context={"found": found, "expected": expected},
        )
