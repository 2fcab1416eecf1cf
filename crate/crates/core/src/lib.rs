//! Trade-off spaces of approximate computing frameworks: Pareto frontiers,
//! cross-framework comparison, and combined-configuration search.

pub mod baselines;
pub mod bench;
pub mod boa;
pub mod combined;
pub mod error;
pub mod metrics;
pub mod pareto;
pub mod search;
pub mod space;
pub mod viper;

pub use combined::CombinedConfiguration;
pub use error::{Error, Result};
pub use pareto::{pareto_extract, FrontierCurve};
pub use search::{Aggregation, Evaluator, SearchOutcome, SearchReport};
pub use space::{Configuration, Knob, NormalizationBounds, Record, TradeoffPoint, TradeoffSpace};
