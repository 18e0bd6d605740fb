//! N-gram language models over continuous token streams.
//!
//! Training collects all k-gram counts for k ≤ n over the raw stream; no
//! sentence boundaries are inserted anywhere (training, generation, and
//! scoring all treat the corpus as one continuous sequence). Queries with a
//! context shorter than n−1 are answered by the model of the corresponding
//! lower order, which is also how the first positions of a stream are
//! scored and how generation starts.
//!
//! Four smoothing schemes are supported:
//!
//! - **MLE**: raw relative frequencies; an unseen context falls back to the
//!   uniform distribution when scoring and to the longest seen suffix
//!   context when generating.
//! - **Linear interpolation**: a simplex-weighted mixture of the MLE models
//!   of orders 1..n. Weights can be given explicitly or estimated by a
//!   deterministic grid search (step 0.05) maximizing held-out
//!   log-likelihood on the tail of the training stream.
//! - **Katz backoff**: Good-Turing discounting of counts r ≤ k (default
//!   k = 5) via r* = (r+1)·N_{r+1}/N_r, with backoff weights α(context)
//!   renormalizing the leftover mass through the next-lower order.
//! - **Kneser-Ney**: interpolated variant with one absolute discount per
//!   order, D = n₁/(n₁+2n₂); lower orders use continuation counts.
//!
//! For every scheme and every context, the token distribution sums to one
//! (the normalization suite pins this to 1e-9), and generation samples from
//! exactly the distribution that scoring reports.

mod serialize;
mod table;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parallel;
use crate::textio::{TokenId, TokenStream, Vocabulary};

use super::ModelError;
use table::{fill_continuations, GramTable};

/// Requested smoothing scheme for [`ngram_train`].
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothingConfig {
    Mle,
    /// `weights[j]` is the mixture weight of the order-(j+1) MLE component;
    /// `None` estimates the weights on held-out data.
    Interpolation { weights: Option<Vec<f64>> },
    /// Good-Turing discounting threshold (counts above it are not
    /// discounted).
    KatzBackoff { threshold: u32 },
    KneserNey,
}

/// Resolved smoothing state of a trained model.
#[derive(Debug, Clone, PartialEq)]
pub enum Smoothing {
    Mle,
    Interpolation {
        weights: Vec<f64>,
    },
    KatzBackoff {
        threshold: u32,
        /// discounts[k-1][r] = d_r at order k (index 0 and order 1 unused).
        discounts: Vec<Vec<f64>>,
    },
    KneserNey {
        /// discounts[k-1] = D at order k.
        discounts: Vec<f64>,
    },
}

impl Smoothing {
    pub fn name(&self) -> &'static str {
        match self {
            Smoothing::Mle => "mle",
            Smoothing::Interpolation { .. } => "interpolation",
            Smoothing::KatzBackoff { .. } => "katz",
            Smoothing::KneserNey { .. } => "kneser-ney",
        }
    }
}

/// An immutable trained n-gram model.
#[derive(Debug, Clone)]
pub struct NGramModel {
    order: usize,
    vocab: Arc<Vocabulary>,
    /// tables[k-1] holds the order-k grams.
    tables: Vec<GramTable>,
    smoothing: Smoothing,
    /// Katz only: backoff weight per context, alphas[k-2] aligned with
    /// tables[k-2]; NaN marks "renormalize seen mass" contexts.
    katz_alphas: Vec<Vec<f64>>,
    /// Katz only: prefix sums of discounted counts d_r·r per order,
    /// aligned like count_prefix.
    katz_disc_prefix: Vec<Vec<f64>>,
}

impl NGramModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn vocab_arc(&self) -> Arc<Vocabulary> {
        Arc::clone(&self.vocab)
    }

    pub fn smoothing(&self) -> &Smoothing {
        &self.smoothing
    }

    /// q(token | context). The context may be shorter than order−1; the
    /// model answers at the corresponding lower order. Longer contexts
    /// are truncated to their last order−1 tokens.
    pub fn prob(&self, context: &[TokenId], token: TokenId) -> f64 {
        let max_ctx = self.order - 1;
        let ctx = if context.len() > max_ctx {
            &context[context.len() - max_ctx..]
        } else {
            context
        };
        match &self.smoothing {
            Smoothing::Mle => self.mle_prob(ctx, token),
            Smoothing::Interpolation { weights } => self.interp_prob(weights, ctx, token),
            Smoothing::KatzBackoff { .. } => self.katz_prob(ctx, token),
            Smoothing::KneserNey { discounts } => {
                self.kn_prob(discounts, ctx.len() + 1, ctx, token, true)
            }
        }
    }

    fn uniform(&self) -> f64 {
        1.0 / self.vocab.len() as f64
    }

    /// MLE at level ctx.len()+1 with uniform fallback for unseen contexts.
    fn mle_prob(&self, ctx: &[TokenId], token: TokenId) -> f64 {
        let table = &self.tables[ctx.len()];
        let range = table.prefix_range(ctx);
        let total = table.count_sum(range.clone());
        if total == 0 {
            return self.uniform();
        }
        let c = table
            .find_in_range(range, token)
            .map(|i| table.counts[i] as u64)
            .unwrap_or(0);
        c as f64 / total as f64
    }

    fn interp_prob(&self, weights: &[f64], ctx: &[TokenId], token: TokenId) -> f64 {
        // Components above the available context are dropped and the
        // remaining weights renormalized, keeping the distribution proper.
        let top = ctx.len() + 1;
        let norm: f64 = weights[..top].iter().sum();
        let mut p = 0.0;
        for (j, &w) in weights[..top].iter().enumerate() {
            if w > 0.0 {
                p += w / norm * self.mle_prob(&ctx[ctx.len() - j..], token);
            }
        }
        p
    }

    fn katz_discount(&self, level: usize, r: u32) -> f64 {
        match &self.smoothing {
            Smoothing::KatzBackoff { threshold, discounts } => {
                if r > *threshold {
                    1.0
                } else {
                    discounts[level - 1][r as usize]
                }
            }
            _ => unreachable!("katz_discount on non-Katz model"),
        }
    }

    fn katz_prob(&self, ctx: &[TokenId], token: TokenId) -> f64 {
        let level = ctx.len() + 1;
        let table = &self.tables[level - 1];
        let range = table.prefix_range(ctx);
        let total = table.count_sum(range.clone());
        if level == 1 {
            let c = table
                .find_in_range(range, token)
                .map(|i| table.counts[i] as u64)
                .unwrap_or(0);
            return c as f64 / total as f64;
        }
        if total == 0 {
            return self.katz_prob(&ctx[1..], token);
        }
        let alpha = {
            let ctx_idx = self.tables[level - 2]
                .find(ctx)
                .expect("nonempty range implies observed context");
            self.katz_alphas[level - 2][ctx_idx]
        };
        if let Some(i) = table.find_in_range(range.clone(), token) {
            let r = table.counts[i];
            let p = self.katz_discount(level, r) * r as f64 / total as f64;
            if alpha.is_nan() {
                // Lower order had no mass left for unseen tokens: the seen
                // mass is renormalized to one instead.
                let seen = self.katz_disc_sum(level, range) / total as f64;
                return p / seen;
            }
            return p;
        }
        if alpha.is_nan() {
            return 0.0;
        }
        alpha * self.katz_prob(&ctx[1..], token)
    }

    fn katz_disc_sum(&self, level: usize, range: std::ops::Range<usize>) -> f64 {
        let prefix = &self.katz_disc_prefix[level - 1];
        prefix[range.end] - prefix[range.start]
    }

    /// Interpolated Kneser-Ney. The query's top level uses raw counts;
    /// lower levels use continuation counts.
    fn kn_prob(&self, discounts: &[f64], level: usize, ctx: &[TokenId], token: TokenId, top: bool) -> f64 {
        if level == 0 {
            return self.uniform();
        }
        let table = &self.tables[level - 1];
        let range = table.prefix_range(ctx);
        let (total, distinct) = if top {
            (table.count_sum(range.clone()), range.len() as u64)
        } else {
            (table.cont_sum(range.clone()), table.cont_nonzero(range.clone()))
        };
        let next_ctx = if ctx.is_empty() { ctx } else { &ctx[1..] };
        if total == 0 {
            return self.kn_prob(discounts, level - 1, next_ctx, token, false);
        }
        let d = discounts[level - 1];
        let c = table
            .find_in_range(range, token)
            .map(|i| if top { table.counts[i] } else { table.cont[i] })
            .unwrap_or(0) as f64;
        let seen = (c - d).max(0.0) / total as f64;
        let gamma = d * distinct as f64 / total as f64;
        seen + gamma * self.kn_prob(discounts, level - 1, next_ctx, token, false)
    }

    /// Sample one token from q(· | context); the distribution matches
    /// [`NGramModel::prob`] exactly.
    pub fn sample(&self, context: &[TokenId], rng: &mut ChaCha8Rng) -> TokenId {
        let max_ctx = self.order - 1;
        let ctx = if context.len() > max_ctx {
            &context[context.len() - max_ctx..]
        } else {
            context
        };
        match &self.smoothing {
            Smoothing::Mle => self.mle_sample(ctx, rng),
            Smoothing::Interpolation { weights } => self.interp_sample(weights, ctx, rng),
            Smoothing::KatzBackoff { .. } => self.katz_sample(ctx, rng),
            Smoothing::KneserNey { discounts } => {
                self.kn_sample(discounts, ctx.len() + 1, ctx, true, rng)
            }
        }
    }

    /// Sample proportional to raw counts within a range: binary search over
    /// the count prefix sums.
    fn sample_range_by_count(
        &self,
        level: usize,
        range: std::ops::Range<usize>,
        rng: &mut ChaCha8Rng,
    ) -> TokenId {
        let table = &self.tables[level - 1];
        let base = table.count_prefix[range.start];
        let total = table.count_prefix[range.end] - base;
        let u = rng.random_range(0..total) + base;
        let i = table.count_prefix.partition_point(|&p| p <= u) - 1;
        table.last_token(i)
    }

    fn mle_sample(&self, ctx: &[TokenId], rng: &mut ChaCha8Rng) -> TokenId {
        // Longest seen suffix context; the unigram level always has mass.
        for start in 0..=ctx.len() {
            let sub = &ctx[start..];
            let level = sub.len() + 1;
            let table = &self.tables[level - 1];
            let range = table.prefix_range(sub);
            if table.count_sum(range.clone()) > 0 {
                return self.sample_range_by_count(level, range, rng);
            }
        }
        unreachable!("unigram table is never empty");
    }

    fn interp_sample(&self, weights: &[f64], ctx: &[TokenId], rng: &mut ChaCha8Rng) -> TokenId {
        let top = ctx.len() + 1;
        let norm: f64 = weights[..top].iter().sum();
        let mut u: f64 = rng.random::<f64>() * norm;
        let mut j = 0usize;
        for (idx, &w) in weights[..top].iter().enumerate() {
            j = idx;
            if u < w {
                break;
            }
            u -= w;
        }
        // Sample from the chosen MLE component; unseen context means the
        // component is uniform, matching interp_prob.
        let sub = &ctx[ctx.len() - j..];
        let level = sub.len() + 1;
        let table = &self.tables[level - 1];
        let range = table.prefix_range(sub);
        if table.count_sum(range.clone()) == 0 {
            return rng.random_range(0..self.vocab.len() as u32);
        }
        self.sample_range_by_count(level, range, rng)
    }

    fn katz_sample(&self, ctx: &[TokenId], rng: &mut ChaCha8Rng) -> TokenId {
        let level = ctx.len() + 1;
        let table = &self.tables[level - 1];
        let range = table.prefix_range(ctx);
        let total = table.count_sum(range.clone());
        if level == 1 {
            return self.sample_range_by_count(1, range, rng);
        }
        if total == 0 {
            return self.katz_sample(&ctx[1..], rng);
        }
        let ctx_idx = self.tables[level - 2]
            .find(ctx)
            .expect("nonempty range implies observed context");
        let alpha = self.katz_alphas[level - 2][ctx_idx];
        let seen_mass = self.katz_disc_sum(level, range.clone()) / total as f64;
        if alpha.is_nan() || rng.random::<f64>() < seen_mass {
            // Sample among seen successors proportional to d_r·r via the
            // discounted prefix sums.
            let prefix = &self.katz_disc_prefix[level - 1];
            let base = prefix[range.start];
            let x = rng.random::<f64>() * (prefix[range.end] - base);
            let i = search_f64_prefix(prefix, range.clone(), x + base);
            return table.last_token(i);
        }
        // Backoff branch: draw from the lower order conditioned on being
        // unseen after this context, by rejection.
        loop {
            let w = self.katz_sample(&ctx[1..], rng);
            if table.find_in_range(range.clone(), w).is_none() {
                return w;
            }
        }
    }

    fn kn_sample(
        &self,
        discounts: &[f64],
        level: usize,
        ctx: &[TokenId],
        top: bool,
        rng: &mut ChaCha8Rng,
    ) -> TokenId {
        if level == 0 {
            return rng.random_range(0..self.vocab.len() as u32);
        }
        let table = &self.tables[level - 1];
        let range = table.prefix_range(ctx);
        let (total, distinct) = if top {
            (table.count_sum(range.clone()), range.len() as u64)
        } else {
            (table.cont_sum(range.clone()), table.cont_nonzero(range.clone()))
        };
        let next_ctx = if ctx.is_empty() { ctx } else { &ctx[1..] };
        if total == 0 {
            return self.kn_sample(discounts, level - 1, next_ctx, false, rng);
        }
        let d = discounts[level - 1];
        let seen_mass = (total as f64 - d * distinct as f64) / total as f64;
        if rng.random::<f64>() < seen_mass {
            // Weight c − d per gram: binary search on prefix sums adjusted
            // by the discount times the number of (nonzero) grams passed.
            let x = rng.random::<f64>() * (total as f64 - d * distinct as f64);
            let cum = |i: usize| -> f64 {
                if top {
                    (table.count_prefix[i] - table.count_prefix[range.start]) as f64
                        - d * (i - range.start) as f64
                } else {
                    (table.cont_prefix[i] - table.cont_prefix[range.start]) as f64
                        - d * (table.cont_nz_prefix[i] - table.cont_nz_prefix[range.start]) as f64
                }
            };
            let mut lo = range.start + 1;
            let mut hi = range.end;
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if cum(mid) > x {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return table.last_token(lo - 1);
        }
        self.kn_sample(discounts, level - 1, next_ctx, false, rng)
    }
}

fn search_f64_prefix(prefix: &[f64], range: std::ops::Range<usize>, x: f64) -> usize {
    let mut lo = range.start + 1;
    let mut hi = range.end;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if prefix[mid] > x {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo - 1
}

/// Train an n-gram model on a continuous stream.
pub fn ngram_train(
    stream: &TokenStream,
    n: usize,
    config: SmoothingConfig,
    held_out_fraction: f64,
) -> Result<NGramModel, ModelError> {
    if n < 1 {
        return Err(ModelError::InvalidParameter("order must be >= 1".into()));
    }
    if stream.len() < n {
        return Err(ModelError::InsufficientData(format!(
            "stream of {} tokens is shorter than the order {n}",
            stream.len()
        )));
    }
    if stream.vocab().len() < 2 {
        return Err(ModelError::InsufficientData(
            "vocabulary must contain at least 2 types".into(),
        ));
    }
    let tokens = stream.tokens();
    let mut tables: Vec<GramTable> = (1..=n).map(|k| GramTable::build(tokens, k)).collect();
    for k in (0..n.saturating_sub(1)).rev() {
        let (lower, higher) = tables.split_at_mut(k + 1);
        fill_continuations(&mut lower[k], &higher[0]);
    }

    let mut model = NGramModel {
        order: n,
        vocab: stream.vocab_arc(),
        tables,
        smoothing: Smoothing::Mle,
        katz_alphas: Vec::new(),
        katz_disc_prefix: Vec::new(),
    };

    match config {
        SmoothingConfig::Mle => {}
        SmoothingConfig::Interpolation { weights } => {
            let weights = match weights {
                Some(w) => validate_weights(w, n)?,
                None => estimate_interpolation_weights(stream, n, held_out_fraction)?,
            };
            model.smoothing = Smoothing::Interpolation { weights };
        }
        SmoothingConfig::KatzBackoff { threshold } => {
            if threshold < 1 {
                return Err(ModelError::InvalidParameter(
                    "Katz threshold must be >= 1".into(),
                ));
            }
            install_katz(&mut model, threshold);
        }
        SmoothingConfig::KneserNey => {
            let discounts = (1..=n)
                .map(|k| kneser_ney_discount(&model.tables[k - 1]))
                .collect();
            model.smoothing = Smoothing::KneserNey { discounts };
        }
    }
    Ok(model)
}

/// q(token | context); free-function form of [`NGramModel::prob`].
pub fn ngram_prob(model: &NGramModel, context: &[TokenId], token: TokenId) -> f64 {
    model.prob(context, token)
}

/// Autoregressive sampling: the first n−1 positions are drawn from
/// progressively lower orders (unigram first), every later position from
/// the full-order distribution. Deterministic in (model, length, seed).
pub fn ngram_generate(
    model: &NGramModel,
    length: usize,
    seed: u64,
) -> Result<TokenStream, ModelError> {
    if length < 1 {
        return Err(ModelError::InsufficientData(
            "generation length must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_ctx = model.order - 1;
    let mut out: Vec<TokenId> = Vec::with_capacity(length);
    for i in 0..length {
        let start = i.saturating_sub(max_ctx);
        let token = {
            let ctx = &out[start..i];
            model.sample(ctx, &mut rng)
        };
        out.push(token);
    }
    Ok(TokenStream::from_parts(out, model.vocab_arc()))
}

fn validate_weights(w: Vec<f64>, n: usize) -> Result<Vec<f64>, ModelError> {
    if w.len() != n {
        return Err(ModelError::InvalidParameter(format!(
            "need {n} interpolation weights, got {}",
            w.len()
        )));
    }
    if w.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(ModelError::InvalidParameter(
            "interpolation weights must be finite and nonnegative".into(),
        ));
    }
    let sum: f64 = w.iter().sum();
    if sum <= 0.0 {
        return Err(ModelError::InvalidParameter(
            "interpolation weights must not all be zero".into(),
        ));
    }
    Ok(w.into_iter().map(|x| x / sum).collect())
}

/// Deterministic grid search (step 0.05 on the simplex) maximizing
/// log-likelihood of a held-out tail under MLE components trained on the
/// head. Positions where every component is zero (tokens unseen in the
/// head) are skipped. At most the last 50k held-out positions are used.
fn estimate_interpolation_weights(
    stream: &TokenStream,
    n: usize,
    held_out_fraction: f64,
) -> Result<Vec<f64>, ModelError> {
    if !(held_out_fraction > 0.0 && held_out_fraction < 1.0) {
        return Err(ModelError::InvalidParameter(format!(
            "held-out fraction must be in (0, 1), got {held_out_fraction}"
        )));
    }
    let len = stream.len();
    let held = ((len as f64 * held_out_fraction).round() as usize).max(1);
    let split = len - held;
    if split < n {
        return Err(ModelError::InsufficientData(
            "training head is shorter than the model order".into(),
        ));
    }
    let tokens = stream.tokens();
    let head_tables: Vec<GramTable> = (1..=n).map(|k| GramTable::build(&tokens[..split], k)).collect();

    const MAX_POSITIONS: usize = 50_000;
    let eval_start = split.max(len.saturating_sub(MAX_POSITIONS));
    let positions: Vec<usize> = (eval_start..len).collect();

    // Per-position MLE component probabilities, computed once.
    let comps: Vec<Vec<f64>> = parallel::ordered_map(positions.len(), |pi| {
        let i = positions[pi];
        (0..n)
            .map(|j| {
                if i < j {
                    return 0.0;
                }
                let table = &head_tables[j];
                let range = table.prefix_range(&tokens[i - j..i]);
                let total = table.count_sum(range.clone());
                if total == 0 {
                    return 0.0;
                }
                table
                    .find_in_range(range, tokens[i])
                    .map(|g| table.counts[g] as f64 / total as f64)
                    .unwrap_or(0.0)
            })
            .collect()
    });
    let usable: Vec<&Vec<f64>> = comps.iter().filter(|c| c.iter().any(|&p| p > 0.0)).collect();
    if usable.is_empty() {
        return Err(ModelError::InsufficientData(
            "held-out tail shares no grams with the training head".into(),
        ));
    }

    let grid = simplex_grid(n, 20);
    let mut best: Option<(f64, &Vec<f64>)> = None;
    let scores = parallel::ordered_map(grid.len(), |gi| {
        let w = &grid[gi];
        let mut ll = 0.0;
        for c in &usable {
            let p: f64 = w.iter().zip(c.iter()).map(|(&wj, &pj)| wj * pj).sum();
            if p > 0.0 {
                ll += p.ln();
            } else {
                ll = f64::NEG_INFINITY;
                break;
            }
        }
        ll
    });
    for (w, &ll) in grid.iter().zip(scores.iter()) {
        if best.is_none() || ll > best.unwrap().0 {
            best = Some((ll, w));
        }
    }
    let (_, w) = best.expect("grid is nonempty");
    Ok(w.clone())
}

/// All weight vectors on the n-simplex with entries in units of 1/steps,
/// in lexicographic order.
fn simplex_grid(n: usize, steps: u32) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(dim: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<f64>>, steps: u32) {
        if dim + 1 == current.len() {
            current[dim] = remaining;
            out.push(current.iter().map(|&u| u as f64 / steps as f64).collect());
            return;
        }
        for units in 0..=remaining {
            current[dim] = units;
            rec(dim + 1, remaining - units, current, out, steps);
        }
    }
    if n == 1 {
        return vec![vec![1.0]];
    }
    rec(0, steps, &mut current, &mut out, steps);
    out
}

fn kneser_ney_discount(table: &GramTable) -> f64 {
    let n_r = table.count_of_counts(2);
    let denom = n_r[1] + 2 * n_r[2];
    if denom == 0 {
        // No low counts to estimate from; a neutral discount keeps the
        // distribution proper.
        return 0.5;
    }
    n_r[1] as f64 / denom as f64
}

/// Good-Turing discount factors d_r = r*/r with r* = (r+1)·N_{r+1}/N_r for
/// r ≤ threshold. Degenerate count tables (missing N_r or d outside (0,1])
/// leave the count undiscounted.
fn katz_discounts(table: &GramTable, threshold: u32) -> Vec<f64> {
    let n_r = table.count_of_counts(threshold + 1);
    let mut d = vec![1.0f64; threshold as usize + 1];
    for r in 1..=threshold as usize {
        let nr = n_r[r];
        let nr1 = n_r[r + 1];
        if nr == 0 || nr1 == 0 {
            continue;
        }
        let r_star = (r as f64 + 1.0) * nr1 as f64 / nr as f64;
        let dr = r_star / r as f64;
        if dr > 0.0 && dr <= 1.0 {
            d[r] = dr;
        }
    }
    d
}

fn install_katz(model: &mut NGramModel, threshold: u32) {
    let n = model.order;
    let discounts: Vec<Vec<f64>> = (1..=n)
        .map(|k| katz_discounts(&model.tables[k - 1], threshold))
        .collect();
    model.smoothing = Smoothing::KatzBackoff {
        threshold,
        discounts,
    };
    rebuild_katz_derived(model);
}

/// Rebuild the Katz derived state (discounted prefix sums and backoff
/// weights) from the stored discounts. Also used after deserialization.
pub(super) fn rebuild_katz_derived(model: &mut NGramModel) {
    let n = model.order;
    // Discounted-count prefix sums per order (order 1 stays raw: MLE).
    let disc_of = |model: &NGramModel, level: usize, r: u32| -> f64 {
        if level == 1 {
            1.0
        } else {
            model.katz_discount(level, r)
        }
    };
    model.katz_disc_prefix = (1..=n)
        .map(|level| {
            let table = &model.tables[level - 1];
            let mut prefix = Vec::with_capacity(table.len() + 1);
            let mut acc = 0.0f64;
            prefix.push(0.0);
            for i in 0..table.len() {
                acc += disc_of(model, level, table.counts[i]) * table.counts[i] as f64;
                prefix.push(acc);
            }
            prefix
        })
        .collect();

    // Backoff weights bottom-up: level k contexts are the (k-1)-grams.
    model.katz_alphas = Vec::new();
    for level in 2..=n {
        let ctx_table_len = model.tables[level - 2].len();
        let alphas = parallel::ordered_map(ctx_table_len, |ci| {
            let ctx: Vec<TokenId> = model.tables[level - 2].gram(ci).to_vec();
            let table = &model.tables[level - 1];
            let range = table.prefix_range(&ctx);
            let total = table.count_sum(range.clone());
            if total == 0 {
                // Context never continues (stream-final gram): back off
                // with full weight.
                return 1.0;
            }
            let seen_disc = model.katz_disc_sum(level, range.clone()) / total as f64;
            let mut seen_lower = 0.0;
            for i in range {
                seen_lower += model.katz_prob(&ctx[1..], table.last_token(i));
            }
            let leftover = 1.0 - seen_disc;
            let denom = 1.0 - seen_lower;
            if denom <= 1e-12 {
                // The lower order spends all its mass on seen successors;
                // renormalize the seen mass instead (NaN sentinel).
                f64::NAN
            } else if leftover <= 0.0 {
                0.0
            } else {
                leftover / denom
            }
        });
        model.katz_alphas.push(alphas);
    }
}

pub use serialize::{load_model, save_model};
