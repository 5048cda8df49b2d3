//! Sampling (stub).
