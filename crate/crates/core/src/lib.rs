//! Synthesis of minimal collectives of 2-input Boolean neurons from small
//! labeled datasets.
//!
//! The pipeline quantizes each variable at its error-minimizing threshold,
//! replaces variables by products when a product quantizes strictly better,
//! grows neurons layer by layer while each addition strictly reduces errors,
//! and finally votes with the equal-error neurons of the last useful layer,
//! refusing decisions whose coherence falls below χ₀.
//!
//! ```
//! use logic_gmdh::{LabelMap, LearningSet, SynthesisConfig, synthesize};
//!
//! let set = LearningSet::new(
//!     vec!["a".into(), "b".into()],
//!     "y",
//!     vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]],
//!     vec![false, true, true, false],
//!     LabelMap::new("even", "odd"),
//! )
//! .unwrap();
//! let config = SynthesisConfig { max_p: Some(1), ..SynthesisConfig::default() };
//! let out = synthesize(&set, &config).unwrap();
//! assert_eq!(out.collective.errors(), 0);
//! ```

pub mod cli;
pub mod collective;
pub mod dataset;
pub mod error;
pub mod features;
pub mod logic;
pub mod model;
pub mod quantization;
pub mod rules;
pub mod synthesis;

pub use collective::{Chi0, Collective, Decision, Metrics, Verdict};
pub use dataset::{contradiction_bound, load_dataset, split_even, LabelMap, LearningSet, SplitPair};
pub use error::{Error, Result};
pub use features::{admit_generalized, search_products, substitute, FeaturePool, GeneralizedFeature};
pub use logic::{Connective, Expr};
pub use model::Model;
pub use quantization::{quantize, Polarity, QuantizedFeature, Source};
pub use synthesis::{synthesize, Mode, Neuron, StopCause, Synthesis, SynthesisConfig, SynthesisReport};
