//! Tense-consistency evaluation for French-English machine translation.
//!
//! The crate labels English sentences with the tense category of every
//! finite verb chain, detects French tense structures, scores hypothesis
//! translations against references by tense agreement, and builds review
//! corpora from line-aligned parallel text.
//!
//! ```
//! use tensecheck::tense_en::label_sentence;
//!
//! let label = label_sentence("So it is in that spirit that we have made this change.");
//! assert_eq!(label.to_string(), "Present+PrePerfect");
//! ```

pub mod annotate;
pub mod bleu;
pub mod error;
pub mod lexicon;
pub mod metrics;
pub mod par;
pub mod pipeline;
pub mod rng;
pub mod tense_en;
pub mod tense_fr;

pub use error::{Error, Result};
pub use lexicon::{Language, Lexicon};
pub use tense_en::{SentenceLabel, TenseCategory};
pub use tense_fr::FrenchTense;

/// Toolkit version reported in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
