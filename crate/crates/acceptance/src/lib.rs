//! Acceptance suite for `qwalk`; see `tests/acceptance.rs`.
