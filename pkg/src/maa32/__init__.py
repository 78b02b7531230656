"""32-bit message authenticator (the ISO 8731-2 algorithm) with test vectors.

Typical use:

    >>> from maa32 import Key, mac_bytes
    >>> "%08X" % mac_bytes(Key(0xE6A12F07, 0x9D15C437), b"some message")

Messages longer than 256 blocks are chained through 256-block segments
automatically; inputs of a million blocks or more raise MessageTooLong.
"""

from .blocks import (
    ConditioningResult,
    block_hex,
    byt_pat,
    cyc,
    fix1,
    fix2,
    mul1,
    mul2,
    mul2a,
)
from .core import (
    Key,
    LoopState,
    MAX_MESSAGE_BLOCKS,
    MessageTooLong,
    PreludeIntermediate,
    PreludeOutput,
    SEGMENT_BLOCKS,
    coda,
    mac,
    mac_bytes,
    main_loop_step,
    make_message,
    pad_message,
    prelude,
    prelude_intermediate,
    process_segment,
    segment,
)
from .vectors import (
    MacTrace,
    VectorCase,
    VectorFormatError,
    VectorReport,
    builtin_corpus,
    emit_trace,
    parse_vector_file,
    parse_vector_text,
    run_vectors,
)

__version__ = "1.0.0"

__all__ = [
    "ConditioningResult",
    "Key",
    "LoopState",
    "MAX_MESSAGE_BLOCKS",
    "MacTrace",
    "MessageTooLong",
    "PreludeIntermediate",
    "PreludeOutput",
    "SEGMENT_BLOCKS",
    "VectorCase",
    "VectorFormatError",
    "VectorReport",
    "block_hex",
    "builtin_corpus",
    "byt_pat",
    "coda",
    "cyc",
    "emit_trace",
    "fix1",
    "fix2",
    "mac",
    "mac_bytes",
    "main_loop_step",
    "make_message",
    "mul1",
    "mul2",
    "mul2a",
    "pad_message",
    "parse_vector_file",
    "parse_vector_text",
    "prelude",
    "prelude_intermediate",
    "process_segment",
    "run_vectors",
    "segment",
    "__version__",
]
