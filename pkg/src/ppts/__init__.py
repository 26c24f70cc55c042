"""Privacy-preserving gateway for remote chat models.

Sanitizes user text before it leaves the machine, restores the hidden values
in the model's reply, and ships an evaluation harness with simulated attacks
for measuring the privacy/utility tradeoff.
"""

from .attacker import AttackResult, inference_attack, judge, literal_attack
from .errors import (
    BackendTimeoutError,
    ConfigurationError,
    MappingError,
    PPTSError,
    SessionNotFoundError,
    SpanOverlapError,
    TransportError,
    UnfixableConflictError,
    UsageError,
)
from .llm import BackendConfig, ChatMessage, ExtractionRule, complete
from .metrics import (
    AnnotatedExample,
    AttackerSetup,
    DefenderSetup,
    EvaluationReport,
    compute_dpr,
    compute_dur,
    compute_prr,
    evaluate,
)
from .recovery import RecoveredResponse, Substitution, recover
from .sanitizer import (
    ClueKB,
    ClueRule,
    Conflict,
    DetectorConfig,
    MapEntry,
    PrivacySpan,
    PrivacyType,
    SanitizationOutcome,
    SanitizerConfig,
    SurrogateMap,
    apply_replacements,
    choose_surrogate,
    detect_spans,
    fix_inconsistencies,
    privacy_types,
    reasonability_check,
    sanitize,
)

__version__ = "0.1.0"
