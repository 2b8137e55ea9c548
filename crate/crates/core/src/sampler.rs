//! Metropolis–Hastings sampling of pure Plancherel and pure alpha Jack measures on partitions
//! with at most `N` rows, using single-box moves.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactseries::{format_rational, Rational};
use crate::rtransform::{to_f64, EnsembleSpec};

/// Accepted moves between full recomputations of the cached log-weight.
pub const DRIFT_CHECK_INTERVAL: u64 = 10_000;
pub const DRIFT_LIMIT: f64 = 1e-9;

/// Arms below this use the precomputed `ln D(a, l)` table.
const TABLE_ARMS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Add,
    Remove,
}

/// A single-box move; `row` and `col` are 1-based coordinates of the box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub kind: MoveKind,
    pub row: usize,
    pub col: usize,
}

fn validate_partition(lambda: &[u32], n: usize) -> Result<()> {
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition(format!("{lambda:?} is not weakly decreasing")));
    }
    let len = lambda.iter().filter(|&&p| p > 0).count();
    if len > n {
        return Err(Error::Precondition(format!("{lambda:?} has {len} rows, more than N = {n}")));
    }
    Ok(())
}

/// Addable corners (rows `≤ n`) and removable corners of `lambda`.
pub fn proposals(lambda: &[u32], n: usize) -> Result<Vec<Move>> {
    validate_partition(lambda, n)?;
    let parts: Vec<u32> = lambda.iter().copied().filter(|&p| p > 0).collect();
    let mut moves = Vec::new();
    for r in 1..=(parts.len() + 1).min(n) {
        let here = parts.get(r - 1).copied().unwrap_or(0);
        if r == 1 || parts[r - 2] > here {
            moves.push(Move { kind: MoveKind::Add, row: r, col: here as usize + 1 });
        }
    }
    for r in 1..=parts.len() {
        let next = parts.get(r).copied().unwrap_or(0);
        if parts[r - 1] > next {
            moves.push(Move { kind: MoveKind::Remove, row: r, col: parts[r - 1] as usize });
        }
    }
    Ok(moves)
}

/// The measure being sampled, with everything the weight needs in floating point.
#[derive(Clone, Debug)]
pub struct Target {
    n: usize,
    theta: f64,
    /// `ln η` (Plancherel) or `ln c` (alpha).
    ln_box: f64,
    /// `⌊η/θ⌋` for alpha.
    big_l: Option<usize>,
    prefactor: f64,
    max_part: Option<u32>,
    ln_d: Vec<f64>,
}

impl Target {
    pub fn new(spec: &EnsembleSpec, n: usize, theta: &Rational, max_part: Option<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("N must be at least 1".into()));
        }
        if !theta.is_positive() {
            return Err(Error::Parameter(format!("theta must be positive, got {}", format_rational(theta))));
        }
        let th = to_f64(theta);
        let nf = n as f64;
        let (ln_box, big_l, prefactor) = match spec {
            EnsembleSpec::Planch { eta, .. } => (to_f64(eta).ln(), None, -nf * to_f64(eta)),
            EnsembleSpec::Alpha { c, eta, .. } => {
                let l = (eta / theta).floor().to_integer();
                let l = l.to_usize().ok_or_else(|| Error::Parameter("⌊η/θ⌋ is too large".into()))?;
                let cf = to_f64(c);
                (cf.ln(), Some(l), nf * th * l as f64 * (1.0 - cf).ln())
            }
            EnsembleSpec::Beta { .. } => {
                return Err(Error::Parameter("pure beta measures are not sampled".into()));
            }
        };
        let mut t = Target { n, theta: th, ln_box, big_l, prefactor, max_part, ln_d: Vec::new() };
        let width = n + 2;
        t.ln_d = (0..TABLE_ARMS * width)
            .map(|idx| t.ln_d_direct(idx / width, idx % width))
            .collect();
        Ok(t)
    }

    pub fn max_rows(&self) -> usize {
        self.big_l.map_or(self.n, |l| l.min(self.n))
    }

    /// `ln((a + θl + θ)(a + θl + 1))` for arm `a` and leg `l`.
    fn ln_d_direct(&self, a: usize, l: usize) -> f64 {
        let base = a as f64 + self.theta * l as f64;
        ((base + self.theta) * (base + 1.0)).ln()
    }

    #[inline]
    fn ln_d(&self, a: usize, l: usize) -> f64 {
        let width = self.n + 2;
        if a < TABLE_ARMS && l < width {
            self.ln_d[a * width + l]
        } else {
            self.ln_d_direct(a, l)
        }
    }

    /// Numerator factors of box `(i, j)`, including `η` or `c`.
    #[inline]
    fn ln_num(&self, i: usize, j: usize) -> f64 {
        let shift = (j - 1) as f64 - self.theta * (i - 1) as f64;
        let mut v = self.ln_box + (self.n as f64 * self.theta + shift).ln();
        if let Some(l) = self.big_l {
            v += (l as f64 * self.theta + shift).ln();
        }
        v
    }

    /// Full log-weight by summing over boxes; `−∞` outside the support.
    pub fn log_weight(&self, lambda: &[u32]) -> Result<f64> {
        validate_partition(lambda, self.n)?;
        let parts: Vec<u32> = lambda.iter().copied().filter(|&p| p > 0).collect();
        if parts.len() > self.max_rows() {
            return Ok(f64::NEG_INFINITY);
        }
        let conj = conjugate(&parts);
        let mut acc = self.prefactor;
        for (i0, &p) in parts.iter().enumerate() {
            for j0 in 0..p as usize {
                let arm = p as usize - j0 - 1;
                let leg = conj[j0] as usize - i0 - 1;
                acc += self.ln_num(i0 + 1, j0 + 1) - self.ln_d(arm, leg);
            }
        }
        Ok(acc)
    }
}

fn conjugate(parts: &[u32]) -> Vec<u32> {
    let width = parts.first().copied().unwrap_or(0) as usize;
    (1..=width)
        .map(|j| parts.iter().take_while(|&&p| p as usize >= j).count() as u32)
        .collect()
}

/// Log-weight of `lambda` under the pure Jack measure of `spec` with `N` rows and parameter `θ`.
pub fn log_weight(lambda: &[u32], spec: &EnsembleSpec, n: usize, theta: &Rational) -> Result<f64> {
    Target::new(spec, n, theta, None)?.log_weight(lambda)
}

/// The weight without its `λ`-independent prefactor, as an exact rational:
/// `xᵏ Π_boxes num(i,j) / ((a+θl+θ)(a+θl+1))` with `x = η` or `c`.
pub fn box_product_exact(lambda: &[u32], spec: &EnsembleSpec, n: usize, theta: &Rational) -> Result<Rational> {
    validate_partition(lambda, n)?;
    let parts: Vec<u32> = lambda.iter().copied().filter(|&p| p > 0).collect();
    let int = |v: usize| Rational::from_integer(BigInt::from(v));
    let nt = int(n) * theta;
    let (x, lt) = match spec {
        EnsembleSpec::Planch { eta, .. } => (eta.clone(), None),
        EnsembleSpec::Alpha { c, eta, .. } => {
            let l = (eta / theta).floor();
            if parts.len() > l.to_integer().to_usize().unwrap_or(usize::MAX).min(n) {
                return Ok(Rational::zero());
            }
            (c.clone(), Some(l * theta))
        }
        EnsembleSpec::Beta { .. } => {
            return Err(Error::Parameter("pure beta measures are not sampled".into()));
        }
    };
    let conj = conjugate(&parts);
    let mut acc = Rational::one();
    for (i0, &p) in parts.iter().enumerate() {
        for j0 in 0..p as usize {
            let shift = int(j0) - theta * int(i0);
            let mut num = &x * (&nt + &shift);
            if let Some(lt) = &lt {
                num *= lt + &shift;
            }
            let base = int(p as usize - j0 - 1) + theta * int(conj[j0] as usize - i0 - 1);
            acc *= num / ((&base + theta) * (&base + Rational::one()));
        }
    }
    Ok(acc)
}

/// Partition stored as runs `(value, count)` of equal rows, values strictly decreasing,
/// counts summing to `N` (a trailing run of zeros is kept explicitly).
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionState {
    blocks: Vec<(u32, u32)>,
    n: usize,
    log_weight: f64,
}

impl PartitionState {
    pub fn empty(target: &Target) -> Self {
        PartitionState {
            blocks: vec![(0, target.n as u32)],
            n: target.n,
            log_weight: target.prefactor,
        }
    }

    pub fn from_partition(lambda: &[u32], target: &Target) -> Result<Self> {
        let log_weight = target.log_weight(lambda)?;
        if log_weight == f64::NEG_INFINITY {
            return Err(Error::Precondition(format!("{lambda:?} has zero weight")));
        }
        let mut blocks: Vec<(u32, u32)> = Vec::new();
        let mut rows = 0;
        for &p in lambda.iter().filter(|&&p| p > 0) {
            rows += 1;
            match blocks.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => blocks.push((p, 1)),
            }
        }
        if rows < target.n {
            blocks.push((0, (target.n - rows) as u32));
        }
        Ok(PartitionState { blocks, n: target.n, log_weight })
    }

    pub fn lambda(&self) -> Vec<u32> {
        self.blocks
            .iter()
            .filter(|(v, _)| *v > 0)
            .flat_map(|&(v, c)| std::iter::repeat_n(v, c as usize))
            .collect()
    }

    pub fn cached_log_weight(&self) -> f64 {
        self.log_weight
    }

    /// Shifted particles `𝓛ᵢ = λᵢ − (i−1)θ` for all `N` rows.
    pub fn positions(&self, theta: f64, out: &mut Vec<f64>) {
        let mut i = 0usize;
        for &(v, c) in &self.blocks {
            for _ in 0..c {
                out.push(v as f64 - theta * i as f64);
                i += 1;
            }
        }
    }

    /// Rows before block `b`.
    fn rows_before(&self, b: usize) -> usize {
        self.blocks[..b].iter().map(|&(_, c)| c as usize).sum()
    }

    fn can_add(&self, b: usize, target: &Target) -> bool {
        let (v, _) = self.blocks[b];
        let row = self.rows_before(b) + 1;
        row <= target.max_rows() && target.max_part.is_none_or(|m| v < m)
    }

    fn move_count(&self, target: &Target) -> usize {
        let mut rows = 0usize;
        let mut count = 0;
        for &(v, c) in &self.blocks {
            let first = rows + 1;
            if first <= target.max_rows() && target.max_part.is_none_or(|m| v < m) {
                count += 1;
            }
            if v > 0 {
                count += 1;
            }
            rows += c as usize;
        }
        count
    }

    /// The `k`-th move in the order: addable corners by block, then removable corners by block.
    fn nth_move(&self, k: usize, target: &Target) -> Option<(MoveKind, usize)> {
        let mut k = k;
        for b in 0..self.blocks.len() {
            if self.can_add(b, target) {
                if k == 0 {
                    return Some((MoveKind::Add, b));
                }
                k -= 1;
            }
        }
        for (b, &(v, _)) in self.blocks.iter().enumerate() {
            if v > 0 {
                if k == 0 {
                    return Some((MoveKind::Remove, b));
                }
                k -= 1;
            }
        }
        None
    }

    /// Change in log-weight from adding a box to the first row of block `b`.
    fn add_delta(&self, b: usize, target: &Target) -> f64 {
        let (v, _) = self.blocks[b];
        let v = v as usize;
        let c = v + 1;
        let r = self.rows_before(b) + 1;
        let mut delta = target.ln_num(r, c) - target.ln_d(0, 0);
        // Boxes (i, c) above the new one gain one unit of leg.
        let mut before = 0usize;
        for &(vb, cb) in &self.blocks[..b] {
            let after = before + cb as usize;
            let a = vb as usize - c;
            let lmin = r - 1 - after;
            let lmax = r - 2 - before;
            delta += target.ln_d(a, lmin) - target.ln_d(a, lmax + 1);
            before = after;
        }
        // Boxes (r, j) to its left gain one unit of arm.
        let mut through = before;
        for idx in b..self.blocks.len() {
            let (vb, cb) = self.blocks[idx];
            if vb == 0 {
                break;
            }
            through += cb as usize;
            let next = self.blocks.get(idx + 1).map_or(0, |&(x, _)| x as usize);
            let l = through - r;
            delta += target.ln_d(v - vb as usize, l) - target.ln_d(v - next, l);
        }
        delta
    }

    /// Adds a box to the first row of block `b`; returns the block now holding that row.
    fn apply_add(&mut self, b: usize) -> usize {
        let v = self.blocks[b].0;
        let holder = if b > 0 && self.blocks[b - 1].0 == v + 1 {
            self.blocks[b - 1].1 += 1;
            b - 1
        } else {
            self.blocks.insert(b, (v + 1, 1));
            b
        };
        let old = if holder == b { b + 1 } else { b };
        self.blocks[old].1 -= 1;
        if self.blocks[old].1 == 0 {
            self.blocks.remove(old);
        }
        holder
    }

    /// Removes a box from the last row of block `b`; returns the block now holding that row.
    fn apply_remove(&mut self, b: usize) -> usize {
        let v = self.blocks[b].0;
        let mut holder = if self.blocks.get(b + 1).is_some_and(|&(x, _)| x == v - 1) {
            self.blocks[b + 1].1 += 1;
            b + 1
        } else {
            self.blocks.insert(b + 1, (v - 1, 1));
            b + 1
        };
        self.blocks[b].1 -= 1;
        if self.blocks[b].1 == 0 {
            self.blocks.remove(b);
            holder -= 1;
        }
        holder
    }
}

/// Per-chain driver: state, target, and counters.
#[derive(Clone, Debug)]
pub struct Chain {
    pub target: Target,
    pub state: PartitionState,
    accepted: u64,
    proposed: u64,
    since_check: u64,
    max_drift: f64,
}

impl Chain {
    pub fn new(target: Target) -> Self {
        let state = PartitionState::empty(&target);
        Chain { target, state, accepted: 0, proposed: 0, since_check: 0, max_drift: 0.0 }
    }

    pub fn with_state(target: Target, state: PartitionState) -> Self {
        Chain { target, state, accepted: 0, proposed: 0, since_check: 0, max_drift: 0.0 }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn max_drift(&self) -> f64 {
        self.max_drift
    }

    /// Applies move `k`; returns the block to hand to `undo` and the log-weight change.
    fn apply(&mut self, kind: MoveKind, b: usize) -> (MoveKind, usize, f64) {
        match kind {
            MoveKind::Add => {
                let delta = self.state.add_delta(b, &self.target);
                let holder = self.state.apply_add(b);
                (MoveKind::Add, holder, delta)
            }
            MoveKind::Remove => {
                let holder = self.state.apply_remove(b);
                let delta = -self.state.add_delta(holder, &self.target);
                (MoveKind::Remove, holder, delta)
            }
        }
    }

    fn undo(&mut self, kind: MoveKind, holder: usize) {
        match kind {
            MoveKind::Add => {
                self.state.apply_remove(holder);
            }
            MoveKind::Remove => {
                self.state.apply_add(holder);
            }
        }
    }

    /// One Metropolis–Hastings update.
    pub fn step<R: Rng>(&mut self, rng: &mut R) -> Result<bool> {
        let k_here = self.state.move_count(&self.target);
        let pick = rng.random_range(0..k_here);
        let (kind, b) = self.state.nth_move(pick, &self.target).expect("pick < move count");
        let (kind, holder, delta) = self.apply(kind, b);
        let k_there = self.state.move_count(&self.target);
        let log_ratio = delta + (k_here as f64).ln() - (k_there as f64).ln();
        self.proposed += 1;
        let accept = log_ratio >= 0.0 || rng.random::<f64>() < log_ratio.exp();
        if !accept {
            self.undo(kind, holder);
            return Ok(false);
        }
        self.state.log_weight += delta;
        self.accepted += 1;
        self.since_check += 1;
        if self.since_check >= DRIFT_CHECK_INTERVAL {
            self.check_drift()?;
        }
        Ok(true)
    }

    /// Compares the cached log-weight with a full recomputation and resynchronizes it.
    pub fn check_drift(&mut self) -> Result<f64> {
        self.since_check = 0;
        let full = self.target.log_weight(&self.state.lambda())?;
        let drift = (full - self.state.log_weight).abs();
        self.max_drift = self.max_drift.max(drift);
        if drift > DRIFT_LIMIT {
            return Err(Error::Drift { drift, limit: DRIFT_LIMIT });
        }
        self.state.log_weight = full;
        Ok(drift)
    }

    /// Exact one-step transition law from the current state: `(next λ, probability)`,
    /// including the probability of staying put.
    pub fn transition_probabilities(&self) -> Vec<(Vec<u32>, f64)> {
        let k_here = self.state.move_count(&self.target);
        let mut out = Vec::with_capacity(k_here + 1);
        let mut stay = 1.0;
        for pick in 0..k_here {
            let mut probe = self.clone();
            let (kind, b) = probe.state.nth_move(pick, &probe.target).expect("pick < move count");
            let (_, _, delta) = probe.apply(kind, b);
            let k_there = probe.state.move_count(&probe.target);
            let ratio = (delta + (k_here as f64).ln() - (k_there as f64).ln()).exp();
            let p = ratio.min(1.0) / k_here as f64;
            stay -= p;
            out.push((probe.state.lambda(), p));
        }
        out.push((self.state.lambda(), stay));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainConfig {
    pub spec: EnsembleSpec,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "crate::exactseries::rational_str")]
    pub theta: Rational,
    pub sweeps: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub chains: usize,
    /// Metropolis updates per sweep.
    pub updates_per_sweep: usize,
    /// Optional cap on `λ₁` (used to sample truncated state spaces).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_part: Option<u32>,
}

impl ChainConfig {
    /// Defaults: `θ = γ/N`, 20% burn-in, about 1000 retained sweeps per chain,
    /// 4 chains, `N` updates per sweep.
    pub fn new(spec: EnsembleSpec, n: usize, sweeps: u64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("N must be at least 1".into()));
        }
        let theta = spec.gamma() / Rational::from_integer(BigInt::from(n));
        let burn_in = sweeps / 5;
        Ok(ChainConfig {
            spec,
            n,
            theta,
            sweeps,
            burn_in,
            thin: ((sweeps - burn_in) / 1000).max(1),
            seed,
            chains: 4,
            updates_per_sweep: n,
            max_part: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if matches!(self.spec, EnsembleSpec::Beta { .. }) {
            return Err(Error::Parameter("only planch and alpha measures can be sampled".into()));
        }
        if self.sweeps <= self.burn_in {
            return Err(Error::Parameter(format!(
                "sweeps ({}) must exceed burn-in ({})",
                self.sweeps, self.burn_in
            )));
        }
        if self.thin == 0 || self.chains == 0 || self.updates_per_sweep == 0 {
            return Err(Error::Parameter("thin, chains and updates per sweep must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainDiagnostics {
    pub chain: usize,
    pub acceptance_rate: f64,
    pub max_drift: f64,
    /// `(sweep, log-weight)` at every retained sweep.
    pub log_weight_trace: Vec<(u64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub chain: usize,
    pub sweep: u64,
    pub positions: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McmcOutput {
    pub config: ChainConfig,
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<ChainDiagnostics>,
}

impl McmcOutput {
    /// All retained shifted positions over all chains.
    pub fn pooled(&self) -> Vec<f64> {
        self.snapshots.iter().flat_map(|s| s.positions.iter().copied()).collect()
    }
}

fn run_chain(config: &ChainConfig, chain_index: usize) -> Result<(Vec<Snapshot>, ChainDiagnostics)> {
    let target = Target::new(&config.spec, config.n, &config.theta, config.max_part)?;
    let theta = to_f64(&config.theta);
    let mut chain = Chain::new(target);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(chain_index as u64);
    let mut snapshots = Vec::new();
    let mut trace = Vec::new();
    for sweep in 1..=config.sweeps {
        for _ in 0..config.updates_per_sweep {
            chain.step(&mut rng)?;
        }
        if sweep > config.burn_in && (sweep - config.burn_in) % config.thin == 0 {
            let mut positions = Vec::with_capacity(config.n);
            chain.state.positions(theta, &mut positions);
            snapshots.push(Snapshot { chain: chain_index, sweep, positions });
            trace.push((sweep, chain.state.cached_log_weight()));
        }
    }
    chain.check_drift()?;
    let diagnostics = ChainDiagnostics {
        chain: chain_index,
        acceptance_rate: chain.acceptance_rate(),
        max_drift: chain.max_drift(),
        log_weight_trace: trace,
    };
    Ok((snapshots, diagnostics))
}

/// Runs all chains (in parallel when threads are available); results do not depend on scheduling.
pub fn mcmc_run(config: &ChainConfig) -> Result<McmcOutput> {
    config.validate()?;
    let results: Vec<_> = (0..config.chains)
        .into_par_iter()
        .map(|c| run_chain(config, c))
        .collect::<Result<_>>()?;
    let mut snapshots = Vec::new();
    let mut diagnostics = Vec::new();
    for (s, d) in results {
        snapshots.extend(s);
        diagnostics.push(d);
    }
    Ok(McmcOutput { config: config.clone(), snapshots, diagnostics })
}

#[derive(Debug, serde::Deserialize)]
struct SampleRecord {
    #[allow(dead_code)]
    chain: usize,
    #[allow(dead_code)]
    sweep: u64,
    #[allow(dead_code)]
    particle_index: usize,
    position: f64,
}

/// Writes `chain,sweep,particle_index,position` rows (particle indices start at 1).
pub fn write_samples_csv<W: std::io::Write>(output: &McmcOutput, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["chain", "sweep", "particle_index", "position"])?;
    for s in &output.snapshots {
        for (i, x) in s.positions.iter().enumerate() {
            wr.write_record([s.chain.to_string(), s.sweep.to_string(), (i + 1).to_string(), x.to_string()])?;
        }
    }
    wr.flush()?;
    Ok(())
}

/// Reads the positions column of a samples CSV; lines starting with `#` are skipped.
pub fn read_samples_csv<R: std::io::Read>(r: R) -> Result<Vec<f64>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let headers = rd.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["chain", "sweep", "particle_index", "position"] {
        return Err(Error::Parse(format!(
            "expected header chain,sweep,particle_index,position, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for rec in rd.deserialize::<SampleRecord>() {
        let rec = rec?;
        if !rec.position.is_finite() {
            return Err(Error::Parse(format!("position {} is not finite", rec.position)));
        }
        out.push(rec.position);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
}

/// Counts per bin `[k·w, (k+1)·w)`, nonempty bins only, in increasing order.
pub fn histogram(samples: &[f64], bin_width: f64) -> Result<Vec<Bin>> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::Parameter(format!("bin width must be positive, got {bin_width}")));
    }
    let mut counts = std::collections::BTreeMap::<i64, u64>::new();
    for &x in samples {
        if !x.is_finite() {
            return Err(Error::Parameter(format!("sample {x} is not finite")));
        }
        *counts.entry((x / bin_width).floor() as i64).or_default() += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(k, count)| Bin {
            left: k as f64 * bin_width,
            right: (k + 1) as f64 * bin_width,
            count,
        })
        .collect())
}

/// Poisson probabilities `e^{−η} ηᵏ/k!` for `k ≤ k_max`.
pub fn poisson_pmf(eta: f64, k_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut p = (-eta).exp();
    for k in 0..=k_max {
        out.push(p);
        p *= eta / (k + 1) as f64;
    }
    out
}
