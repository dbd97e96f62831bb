//! Inputs shared by the benchmarks.

/// The form fixture with style, content and behavior.
pub const FORM: &str = include_str!("../../../fixtures/form_behavior.uiml");

/// The bare data-collection form.
pub const DATA_COLLECTION: &str = include_str!("../../../fixtures/data_collection.uiml");
