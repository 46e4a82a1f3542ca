//! Serializable reports and the suite runner.
