//! Reciprocal rank fusion, its weighted form, and the type-conditioned
//! variant used by the router.
//!
//! - [`rrf_score`]: `Σ_m 1 / (k + r_m)` over the lists an entity appears in.
//! - [`wrrf_score`]: `Σ_m α_m / (k + r_m)`.
//! - [`type_weighted_rank`]: tool and agent hits are consolidated into one
//!   list with a global base rank `r(e)`, then each entity gets
//!   `α_T / (k + r(e))` if it is a tool and `α_A / (k + r(e))` if it is an
//!   agent. Because both types share the denominator, the relative order of
//!   entities of the same type never changes; the weights only move tools and
//!   agents relative to each other.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::NodeType;
use crate::index::Candidate;

/// Conventional RRF damping constant.
pub const DEFAULT_RRF_K: f64 = 60.0;

#[derive(Debug, Error, PartialEq)]
pub enum FusionError {
    #[error("no ranks to fuse: the entity was retrieved by no list")]
    EmptyRanks,
    #[error("ranks are 1-based; got {0}")]
    InvalidRank(usize),
    #[error("invalid fusion config: {0}")]
    InvalidConfig(String),
    #[error("node `{0}` appears more than once in the merged candidate list")]
    DuplicateCandidate(String),
}

/// Damping constant and per-type weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default = "one")]
    pub alpha_agent: f64,
    #[serde(default = "one")]
    pub alpha_tool: f64,
    /// Min-max normalize similarities per corpus before consolidation.
    #[serde(default)]
    pub normalize_similarity: bool,
}

fn default_k() -> f64 {
    DEFAULT_RRF_K
}

fn one() -> f64 {
    1.0
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_RRF_K,
            alpha_agent: 1.0,
            alpha_tool: 1.0,
            normalize_similarity: false,
        }
    }
}

impl FusionConfig {
    pub fn weighted(alpha_agent: f64, alpha_tool: f64) -> Self {
        Self {
            alpha_agent,
            alpha_tool,
            ..Self::default()
        }
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn validate(&self) -> Result<(), FusionError> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(FusionError::InvalidConfig(format!(
                "k must be positive, got {}",
                self.k
            )));
        }
        for (name, a) in [("alpha_agent", self.alpha_agent), ("alpha_tool", self.alpha_tool)] {
            if !(a.is_finite() && a >= 0.0) {
                return Err(FusionError::InvalidConfig(format!(
                    "{name} must be nonnegative, got {a}"
                )));
            }
        }
        if self.alpha_agent == 0.0 && self.alpha_tool == 0.0 {
            return Err(FusionError::InvalidConfig(
                "alpha_agent and alpha_tool are both zero".into(),
            ));
        }
        Ok(())
    }

    pub fn alpha(&self, node_type: NodeType) -> f64 {
        match node_type {
            NodeType::Agent => self.alpha_agent,
            NodeType::Tool => self.alpha_tool,
        }
    }
}

fn check_k(k: f64) -> Result<(), FusionError> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(FusionError::InvalidConfig(format!("k must be positive, got {k}")))
    }
}

/// Unweighted RRF over the 1-based ranks an entity received.
pub fn rrf_score(ranks: &[usize], k: f64) -> Result<f64, FusionError> {
    check_k(k)?;
    if ranks.is_empty() {
        return Err(FusionError::EmptyRanks);
    }
    ranks.iter().try_fold(0.0, |acc, &r| {
        if r == 0 {
            return Err(FusionError::InvalidRank(r));
        }
        Ok(acc + 1.0 / (k + r as f64))
    })
}

/// Weighted RRF over `(rank, alpha)` pairs.
pub fn wrrf_score(ranks_with_weights: &[(usize, f64)], k: f64) -> Result<f64, FusionError> {
    check_k(k)?;
    if ranks_with_weights.is_empty() {
        return Err(FusionError::EmptyRanks);
    }
    ranks_with_weights.iter().try_fold(0.0, |acc, &(r, alpha)| {
        if r == 0 {
            return Err(FusionError::InvalidRank(r));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(FusionError::InvalidConfig(format!(
                "weight must be nonnegative, got {alpha}"
            )));
        }
        Ok(acc + alpha / (k + r as f64))
    })
}

/// A candidate placed in the consolidated list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    #[serde(flatten)]
    pub candidate: Candidate,
    /// Global 1-based rank after consolidation.
    pub base_rank: usize,
}

/// A candidate with its global base rank and fused score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    #[serde(flatten)]
    pub candidate: Candidate,
    pub base_rank: usize,
    pub fused_score: f64,
}

impl ScoredCandidate {
    pub fn node_id(&self) -> &str {
        &self.candidate.node_id
    }

    pub fn node_type(&self) -> NodeType {
        self.candidate.node_type
    }
}

fn normalized_keys(merged: &[Candidate]) -> Vec<f64> {
    let mut bounds = [(f64::INFINITY, f64::NEG_INFINITY); 2];
    let slot = |t: NodeType| match t {
        NodeType::Tool => 0,
        NodeType::Agent => 1,
    };
    for c in merged {
        let b = &mut bounds[slot(c.node_type)];
        b.0 = b.0.min(c.similarity);
        b.1 = b.1.max(c.similarity);
    }
    merged
        .iter()
        .map(|c| {
            let (lo, hi) = bounds[slot(c.node_type)];
            if hi > lo {
                (c.similarity - lo) / (hi - lo)
            } else {
                1.0
            }
        })
        .collect()
}

/// Consolidates the union of tool and agent hits into one list and assigns
/// global base ranks `1..=len`.
///
/// Order: similarity descending, then tools before agents, then ingestion
/// ordinal. With `normalize` set, each corpus's similarities are first
/// min-max scaled to `[0, 1]`.
pub fn assign_base_ranks_with(merged: Vec<Candidate>, normalize: bool) -> Result<Vec<RankedCandidate>, FusionError> {
    let mut seen = HashSet::with_capacity(merged.len());
    for c in &merged {
        if !seen.insert((c.node_type, c.node_id.as_str())) {
            return Err(FusionError::DuplicateCandidate(c.node_id.clone()));
        }
    }
    let keys = if normalize {
        normalized_keys(&merged)
    } else {
        merged.iter().map(|c| c.similarity).collect()
    };
    let mut order: Vec<usize> = (0..merged.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&merged[a], &merged[b]);
        keys[b]
            .total_cmp(&keys[a])
            .then(ca.node_type.cmp(&cb.node_type))
            .then(ca.ingestion_ordinal.cmp(&cb.ingestion_ordinal))
    });

    let mut slots: Vec<Option<Candidate>> = merged.into_iter().map(Some).collect();
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(i, idx)| RankedCandidate {
            candidate: slots[idx].take().expect("each index visited once"),
            base_rank: i + 1,
        })
        .collect())
}

/// [`assign_base_ranks_with`] without normalization.
pub fn assign_base_ranks(merged: Vec<Candidate>) -> Result<Vec<RankedCandidate>, FusionError> {
    assign_base_ranks_with(merged, false)
}

/// Scores base-ranked candidates by type and sorts them by fused score,
/// breaking exact score ties by the smaller base rank.
pub fn score_ranked(ranked: Vec<RankedCandidate>, cfg: &FusionConfig) -> Result<Vec<ScoredCandidate>, FusionError> {
    cfg.validate()?;
    let mut scored: Vec<ScoredCandidate> = ranked
        .into_iter()
        .map(|r| ScoredCandidate {
            fused_score: cfg.alpha(r.candidate.node_type) / (cfg.k + r.base_rank as f64),
            candidate: r.candidate,
            base_rank: r.base_rank,
        })
        .collect();
    scored.sort_by(|a, b| {
        b.fused_score
            .total_cmp(&a.fused_score)
            .then(a.base_rank.cmp(&b.base_rank))
    });
    Ok(scored)
}

/// Type-conditioned weighted RRF over the merged tool and agent hits.
pub fn type_weighted_rank(merged: Vec<Candidate>, cfg: &FusionConfig) -> Result<Vec<ScoredCandidate>, FusionError> {
    cfg.validate()?;
    score_ranked(assign_base_ranks_with(merged, cfg.normalize_similarity)?, cfg)
}

/// Total order used by list fusion baselines: score descending, then
/// similarity descending, tools first, ingestion ordinal.
pub(crate) fn fused_order(a: &ScoredCandidate, b: &ScoredCandidate) -> Ordering {
    b.fused_score
        .total_cmp(&a.fused_score)
        .then(b.candidate.similarity.total_cmp(&a.candidate.similarity))
        .then(a.candidate.node_type.cmp(&b.candidate.node_type))
        .then(a.candidate.ingestion_ordinal.cmp(&b.candidate.ingestion_ordinal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cand(id: &str, node_type: NodeType, similarity: f64, ordinal: usize) -> Candidate {
        Candidate {
            node_id: id.into(),
            node_type,
            similarity,
            corpus_rank: 1,
            ingestion_ordinal: ordinal,
        }
    }

    #[test]
    fn rrf_examples() {
        assert_eq!(rrf_score(&[1], 60.0).unwrap(), 1.0 / 61.0);
        assert!((rrf_score(&[1], 60.0).unwrap() - 0.016_393_4).abs() < 1e-7);
        assert_eq!(rrf_score(&[1, 1], 60.0).unwrap(), 2.0 / 61.0);
        let got = rrf_score(&[2, 5, 9], 60.0).unwrap();
        assert!((got - (1.0 / 62.0 + 1.0 / 65.0 + 1.0 / 69.0)).abs() < 1e-15);
        assert!((got - 0.046_006_4).abs() < 1e-7);
    }

    #[test]
    fn wrrf_examples() {
        assert_eq!(wrrf_score(&[(1, 1.0)], 60.0).unwrap(), 1.0 / 61.0);
        assert_eq!(wrrf_score(&[(1, 1.5)], 60.0).unwrap(), 1.5 / 61.0);
        let got = wrrf_score(&[(3, 2.0), (7, 0.5)], 60.0).unwrap();
        assert!((got - (2.0 / 63.0 + 0.5 / 67.0)).abs() < 1e-15);
        assert!((got - 0.039_208_7).abs() < 1e-7);
    }

    #[test]
    fn score_errors() {
        assert_eq!(rrf_score(&[], 60.0), Err(FusionError::EmptyRanks));
        assert_eq!(wrrf_score(&[], 60.0), Err(FusionError::EmptyRanks));
        assert_eq!(rrf_score(&[0], 60.0), Err(FusionError::InvalidRank(0)));
        assert!(rrf_score(&[1], 0.0).is_err());
        assert!(wrrf_score(&[(1, -1.0)], 60.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(FusionConfig::default().validate().is_ok());
        assert!(FusionConfig::weighted(0.0, 0.0).validate().is_err());
        assert!(FusionConfig::weighted(0.0, 1.0).validate().is_ok());
        assert!(FusionConfig::weighted(-1.0, 1.0).validate().is_err());
        assert!(FusionConfig::default().with_k(0.0).validate().is_err());
        assert!(FusionConfig::default().with_k(f64::NAN).validate().is_err());
    }

    #[test]
    fn base_ranks_follow_similarity() {
        let one = assign_base_ranks(vec![cand("x", NodeType::Agent, 0.1, 0)]).unwrap();
        assert_eq!(one[0].base_rank, 1);

        let ranked = assign_base_ranks(vec![
            cand("t2", NodeType::Tool, 0.5, 1),
            cand("a1", NodeType::Agent, 0.7, 0),
            cand("t1", NodeType::Tool, 0.9, 0),
        ])
        .unwrap();
        let ids: Vec<_> = ranked
            .iter()
            .map(|r| (r.candidate.node_id.as_str(), r.base_rank))
            .collect();
        assert_eq!(ids, [("t1", 1), ("a1", 2), ("t2", 3)]);
    }

    #[test]
    fn similarity_ties_prefer_tools_then_ordinal() {
        let ranked = assign_base_ranks(vec![
            cand("a0", NodeType::Agent, 0.5, 0),
            cand("t5", NodeType::Tool, 0.5, 5),
            cand("t2", NodeType::Tool, 0.5, 2),
        ])
        .unwrap();
        let ids: Vec<_> = ranked.iter().map(|r| r.candidate.node_id.as_str()).collect();
        assert_eq!(ids, ["t2", "t5", "a0"]);
    }

    #[test]
    fn duplicates_rejected() {
        let err = assign_base_ranks(vec![
            cand("t", NodeType::Tool, 0.5, 0),
            cand("t", NodeType::Tool, 0.4, 0),
        ])
        .unwrap_err();
        assert_eq!(err, FusionError::DuplicateCandidate("t".into()));
    }

    #[test]
    fn agent_emphasis_lifts_second_ranked_agent() {
        let merged = vec![cand("t", NodeType::Tool, 0.9, 0), cand("a", NodeType::Agent, 0.8, 0)];
        let out = type_weighted_rank(merged, &FusionConfig::weighted(1.5, 1.0)).unwrap();
        assert_eq!(out[0].node_id(), "a");
        assert_eq!(out[0].base_rank, 2);
        assert!((out[0].fused_score - 0.024_194).abs() < 1e-6);
        assert!((out[1].fused_score - 0.016_393).abs() < 1e-6);
        assert_eq!(out[0].fused_score, 1.5 / 62.0);
        assert_eq!(out[1].fused_score, 1.0 / 61.0);
    }

    #[test]
    fn exact_score_tie_goes_to_smaller_base_rank() {
        // 1.5 / (60 + 33) == 1 / (60 + 2): agent at r=33 ties tool at r=2.
        let mut merged: Vec<Candidate> = (0..40)
            .map(|i| cand(&format!("t{i}"), NodeType::Tool, 1.0 - i as f64 * 0.01, i))
            .collect();
        merged[32] = cand("a", NodeType::Agent, merged[32].similarity, 0);
        let out = type_weighted_rank(merged, &FusionConfig::weighted(1.5, 1.0)).unwrap();
        let pos_a = out.iter().position(|c| c.node_id() == "a").unwrap();
        let pos_t = out.iter().position(|c| c.node_id() == "t1").unwrap();
        assert_eq!(out[pos_a].fused_score, out[pos_t].fused_score);
        assert_eq!(out[pos_t].base_rank, 2);
        assert!(pos_t < pos_a);
    }

    #[test]
    fn normalization_rescales_per_corpus() {
        // Agents live in a lower similarity band; normalization interleaves them.
        let merged = vec![
            cand("t0", NodeType::Tool, 0.9, 0),
            cand("t1", NodeType::Tool, 0.8, 1),
            cand("a0", NodeType::Agent, 0.3, 0),
            cand("a1", NodeType::Agent, 0.2, 1),
        ];
        let raw: Vec<_> = assign_base_ranks_with(merged.clone(), false)
            .unwrap()
            .into_iter()
            .map(|r| r.candidate.node_id)
            .collect();
        assert_eq!(raw, ["t0", "t1", "a0", "a1"]);
        let norm: Vec<_> = assign_base_ranks_with(merged, true)
            .unwrap()
            .into_iter()
            .map(|r| r.candidate.node_id)
            .collect();
        assert_eq!(norm, ["t0", "a0", "t1", "a1"]);
    }

    fn arb_candidates() -> impl Strategy<Value = Vec<Candidate>> {
        prop::collection::vec((any::<bool>(), 0u8..20), 1..60).prop_map(|items| {
            let (mut nt, mut na) = (0, 0);
            items
                .into_iter()
                .map(|(is_tool, bucket)| {
                    let (node_type, ord) = if is_tool {
                        nt += 1;
                        (NodeType::Tool, nt - 1)
                    } else {
                        na += 1;
                        (NodeType::Agent, na - 1)
                    };
                    let id = format!("{node_type}{ord}");
                    cand(&id, node_type, f64::from(bucket) / 20.0, ord)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn within_type_order_is_base_rank_order(list in arb_candidates(), aa in 0.01f64..5.0, at in 0.01f64..5.0) {
            let out = type_weighted_rank(list, &FusionConfig::weighted(aa, at)).unwrap();
            for t in [NodeType::Tool, NodeType::Agent] {
                let ranks: Vec<usize> = out.iter().filter(|c| c.node_type() == t).map(|c| c.base_rank).collect();
                prop_assert!(ranks.windows(2).all(|w| w[0] < w[1]));
            }
        }

        #[test]
        fn equal_alphas_are_k_invariant(list in arb_candidates(), a in 0.1f64..3.0) {
            let orders: Vec<Vec<String>> = [1.0, 60.0, 1000.0]
                .iter()
                .map(|&k| {
                    type_weighted_rank(list.clone(), &FusionConfig::weighted(a, a).with_k(k))
                        .unwrap()
                        .into_iter()
                        .map(|c| c.candidate.node_id)
                        .collect()
                })
                .collect();
            prop_assert_eq!(&orders[0], &orders[1]);
            prop_assert_eq!(&orders[1], &orders[2]);
        }

        #[test]
        fn scores_strictly_decrease_in_rank(r in 1usize..10_000, k in 0.5f64..500.0, a in 0.01f64..10.0) {
            prop_assert!(rrf_score(&[r], k).unwrap() > rrf_score(&[r + 1], k).unwrap());
            prop_assert!(wrrf_score(&[(r, a)], k).unwrap() > wrrf_score(&[(r + 1, a)], k).unwrap());
        }
    }
}
