//! Endorsement pattern machinery (stub).
