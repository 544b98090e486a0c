//! Outer-iteration state machines for all schemes.
