//! Non-contextual bandit policies.
//!
//! Every policy is driven through [`Policy`]: `select` picks an arm for round
//! `t` (1-based), `update` feeds the observed reward back. Selections carry
//! the cluster path that led to the arm so traces can attribute plays to
//! clusters or tree nodes.

mod hierarchical;
mod thompson;
mod ucb;

pub use hierarchical::{Hts, HtsState};
pub use thompson::{sample_argmax, Ts, TsMax, TsMaxStatistic, TsState, Tsc, TscState};
pub use ucb::{Ucb1, UcbStat, Ucbc, Uct};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::ArmId;
use crate::rng::SimRng;

/// An arm choice together with the cluster ids (two-level policies) or tree
/// node ids (tree policies) visited on the way. Flat policies leave `path` empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub arm: ArmId,
    pub path: Vec<usize>,
}

impl Selection {
    pub fn flat(arm: ArmId) -> Self {
        Self {
            arm,
            path: Vec::new(),
        }
    }
}

/// A sequential decision rule over a fixed arm set.
pub trait Policy: Send {
    /// Short identifier, e.g. `"tsc"`.
    fn name(&self) -> &str;

    fn select(&mut self, t: u64, rng: &mut SimRng) -> Selection;

    fn update(&mut self, selection: &Selection, reward: f64) -> Result<()>;
}
