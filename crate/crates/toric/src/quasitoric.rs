//! Characteristic functions.
