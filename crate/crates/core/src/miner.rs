//! Exhaustive covering: a depth-first search over the conditional FP-trees
//! that keeps, for every positive transaction, the best score seen among
//! the patterns covering it, and prunes with the weakest of those scores.
//!
//! The global pruning threshold is taken over all positive transactions, a
//! transaction not yet covered counting as needing a single positive. A
//! pattern that covers fewer positives than that threshold cannot tie the
//! best pattern of any transaction it covers, and neither can its
//! extensions. Below a visited pattern the same threshold is taken over the
//! positives it covers only, since its extensions cover no others.
//!
//! Candidates are recorded lazily: a pattern whose score is below the
//! current best of every transaction it covers cannot end up in the output
//! and is skipped.
//! The final filter trims every candidate to the values it actually covers,
//! keeps the most specific pattern per positive cover, and keeps those tied
//! best for some positive transaction. Trimming makes the result
//! independent of base merging, branch order and pruning.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering as Atomic};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::Serialize;
use web_time::Instant;

use crate::fptree::{build_tree, prune_items, root_transactions, FpTree, TokenMap};
use crate::lattice::build_lattice;
use crate::model::{
    covers, strictly_subsumes_pattern, ClassTotals, CountStats, Dataset, Domain, Item, ItemValue, Pattern,
};
use crate::relevance::{compare, min_pos_count, score, solve_min_support, Measure, Score};

#[derive(Clone, Debug)]
pub struct MinerConfig {
    pub measure: Measure,
    pub dynamic_merge: bool,
    pub reorder: bool,
    pub bnb: bool,
    /// Root branches are shared among this many threads.
    pub threads: usize,
    pub time_limit: Option<Duration>,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            measure: Measure::FScore,
            dynamic_merge: true,
            reorder: true,
            bnb: true,
            threads: 1,
            time_limit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub pattern: Pattern,
    pub stats: CountStats,
    pub score: Score,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunStats {
    pub visited: u64,
    pub recorded: u64,
    #[serde(serialize_with = "serialize_score")]
    pub sigma_min: Score,
    pub min_pos_count: u64,
    pub elapsed: Duration,
    pub truncated: bool,
}

fn serialize_score<S: serde::Serializer>(s: &Score, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_f64(s.to_f64())
}

#[derive(Clone, Debug)]
pub struct MineResult {
    pub patterns: Vec<Candidate>,
    pub stats: RunStats,
    pub totals: ClassTotals,
}

/// Per positive transaction, the best score recorded among patterns
/// covering it, plus every recorded candidate.
#[derive(Debug)]
pub struct CandidateState {
    measure: Measure,
    totals: ClassTotals,
    positives: Vec<u32>,
    /// Indexed by transaction; `None` for negatives and uncovered positives.
    best: Vec<Option<Score>>,
    /// Per transaction, the positive count a pattern needs to reach `best`.
    need: Vec<u64>,
    uncovered: usize,
    /// Minimum of `best` over all positives, once all are covered.
    floor: Option<Score>,
    stale_floor: bool,
    min_pos: u64,
    candidates: Vec<Arc<Candidate>>,
}

impl CandidateState {
    pub fn new(d: &Dataset, measure: Measure) -> Self {
        let positives: Vec<u32> = d.positive_indices().into_iter().map(|i| i as u32).collect();
        CandidateState {
            measure,
            totals: d.totals(),
            uncovered: positives.len(),
            positives,
            best: vec![None; d.transactions.len()],
            need: vec![1; d.transactions.len()],
            floor: None,
            stale_floor: false,
            min_pos: 1,
            candidates: Vec::new(),
        }
    }

    pub fn best(&self, tid: u32) -> Option<Score> {
        self.best[tid as usize]
    }

    /// Could a pattern with this score still be tied best somewhere?
    pub fn admits(&self, s: Score) -> bool {
        self.floor.is_none_or(|f| compare(s, f) != Ordering::Less)
    }

    /// Record `c`, covering the positives `tids`. Returns false if it was
    /// below the best of every transaction it covers and therefore dropped.
    pub fn record_candidate(&mut self, c: Arc<Candidate>, tids: &[u32]) -> bool {
        let below = |t: &u32| self.best[*t as usize].is_some_and(|b| compare(c.score, b) == Ordering::Less);
        if !self.admits(c.score) || tids.iter().all(below) {
            return false;
        }
        let mut need = None;
        for &t in tids {
            let slot = &mut self.best[t as usize];
            match *slot {
                None => {
                    self.uncovered -= 1;
                    self.stale_floor = true;
                }
                Some(b) if compare(c.score, b) == Ordering::Greater => {
                    if self.floor.is_some_and(|f| compare(b, f) == Ordering::Equal) {
                        self.stale_floor = true;
                    }
                }
                _ => continue,
            }
            *slot = Some(c.score);
            self.need[t as usize] =
                *need.get_or_insert_with(|| min_pos_count(self.measure, c.score, self.totals).max(1));
        }
        self.candidates.push(c);
        true
    }

    /// Recompute the floor and return the minimum positive count a pattern
    /// needs to tie the best of any transaction it covers. Never decreases.
    pub fn raise_threshold(&mut self) -> u64 {
        if self.stale_floor && self.uncovered == 0 {
            self.floor = self
                .positives
                .iter()
                .map(|&t| self.best[t as usize].expect("covered"))
                .min_by(|a, b| compare(*a, *b));
            let k = min_pos_count(self.measure, self.floor.expect("positives exist"), self.totals);
            self.min_pos = self.min_pos.max(k).max(1);
        }
        self.stale_floor = false;
        self.min_pos
    }

    /// The minimum positive count an extension of a pattern covering the
    /// positives `tids` needs to tie the best of one of them; 1 while one of
    /// them is uncovered.
    pub fn cover_threshold(&self, tids: &[u32]) -> u64 {
        tids.iter().map(|&t| self.need[t as usize]).min().unwrap_or(1)
    }

    /// The threshold on `p(x|c)` corresponding to the floor, never below
    /// `1/|D_c|`.
    pub fn sigma_min(&self) -> Score {
        let start = match self.measure {
            Measure::FScore | Measure::SupportDifference => Score::ratio(1, self.totals.pos as i64),
            _ => Score::Approx(1.0 / self.totals.pos as f64),
        };
        match self.floor {
            Some(f) => {
                let u = solve_min_support(self.measure, f, self.totals);
                if compare_mixed(u, start) == Ordering::Greater { u } else { start }
            }
            None => start,
        }
    }

    pub fn candidates(&self) -> &[Arc<Candidate>] {
        &self.candidates
    }
}

fn compare_mixed(a: Score, b: Score) -> Ordering {
    match (a, b) {
        (Score::Exact(_), Score::Exact(_)) | (Score::Approx(_), Score::Approx(_)) => compare(a, b),
        _ => a.to_f64().total_cmp(&b.to_f64()),
    }
}

struct Branch {
    item: Item,
    stats: CountStats,
    score: Score,
}

struct Search<'a> {
    cfg: &'a MinerConfig,
    tm: TokenMap,
    totals: ClassTotals,
    state: Mutex<CandidateState>,
    min_pos: AtomicU64,
    visited: AtomicU64,
    stop: AtomicBool,
    deadline: Option<Instant>,
}

impl Search<'_> {
    fn min_pos(&self) -> u64 {
        if self.cfg.bnb {
            self.min_pos.load(Atomic::Relaxed)
        } else {
            1
        }
    }

    fn stopped(&self) -> bool {
        if self.stop.load(Atomic::Relaxed) {
            return true;
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stop.store(true, Atomic::Relaxed);
            return true;
        }
        false
    }

    /// Extension items of the context held by `tree`, ordered for visiting,
    /// with upper intervals registered in the header.
    fn branches(&self, tree: &mut FpTree, d: &Dataset, local_min: u64) -> Vec<Branch> {
        let min_pos = self.min_pos().max(local_min);
        let ctx = tree.totals();
        let mut out = Vec::new();
        let tokens = tree.tokens().to_vec();
        let mut k = 0;
        while k < tokens.len() {
            let tok = tokens[k];
            let attr = self.tm.attr(tok);
            let Some(first) = self.tm.first_base(attr) else {
                let stats = tree.stats(tok);
                if stats.n_pos >= min_pos {
                    out.push(self.branch(self.tm.item(tok), stats));
                }
                k += 1;
                continue;
            };
            while k < tokens.len() && self.tm.attr(tokens[k]) == attr {
                k += 1;
            }
            let Domain::Numeric { cuts } = &d.attributes[attr as usize].domain else { unreachable!() };
            let n = cuts.n_bases();
            let (mut pos, mut neg) = (vec![0u64; n as usize], vec![0u64; n as usize]);
            for b in 0..n {
                let s = tree.stats(first + b);
                pos[b as usize] = s.n_pos;
                neg[b as usize] = s.n_neg;
            }
            let present: u64 = pos.iter().chain(&neg).sum();
            let missing = present < ctx.n_pos + ctx.n_neg;
            let lattice = build_lattice(&pos, &neg, self.cfg.dynamic_merge && !missing);
            for (i, j) in lattice.screen(min_pos) {
                let (lo, hi) = lattice.interval(i, j);
                let item = Item::interval(attr, lo, hi);
                if item.is_upper() {
                    tree.register_upper_links(item, &self.tm);
                }
                out.push(self.branch(item, lattice.stats(i, j)));
            }
        }
        if self.cfg.reorder {
            out.sort_by(|a, b| compare(b.score, a.score).then(a.item.cmp(&b.item)));
        } else {
            out.sort_by_key(|b| (self.tm.rank(&b.item), interval_hi(&b.item)));
        }
        out
    }

    fn branch(&self, item: Item, stats: CountStats) -> Branch {
        Branch { item, stats, score: score(self.cfg.measure, stats, self.totals) }
    }

    /// `local_min` bounds the positive count of every pattern of this
    /// context worth visiting.
    fn mine_context(&self, tree: &mut FpTree, prefix: &Pattern, d: &Dataset, local_min: u64) {
        let branches = self.branches(tree, d, local_min);
        for b in &branches {
            if self.stopped() {
                return;
            }
            self.visit(tree, prefix, b, d, local_min);
        }
    }

    fn visit(&self, tree: &FpTree, prefix: &Pattern, b: &Branch, d: &Dataset, local_min: u64) {
        let min_pos = self.min_pos().max(local_min);
        if b.stats.n_pos < min_pos {
            return;
        }
        self.visited.fetch_add(1, Atomic::Relaxed);
        let pattern = prefix.with(b.item);
        let tids = tree.positive_tids(&b.item, &self.tm);
        let cover_min = {
            let mut st = self.state.lock().unwrap();
            if self.totals.focus(b.stats) && st.admits(b.score) {
                let c = Arc::new(Candidate { pattern: pattern.clone(), stats: b.stats, score: b.score });
                if st.record_candidate(c, &tids) {
                    let m = st.raise_threshold();
                    self.min_pos.fetch_max(m, Atomic::Relaxed);
                }
            }
            st.cover_threshold(&tids)
        };
        // extensions cover subsets of `tids` and score at most the bound of
        // their own positive count
        let child_min = if self.cfg.bnb { min_pos.max(cover_min) } else { 1 };
        if b.stats.n_pos < child_min {
            return;
        }
        let (mut cond, ctx) = tree.project(&b.item, &self.tm);
        prune_items(&mut cond, &self.tm, child_min.max(self.min_pos()));
        if cond.is_empty() {
            return;
        }
        let mut child = build_tree(&cond, ctx);
        self.mine_context(&mut child, &pattern, d, child_min);
    }
}

fn interval_hi(item: &Item) -> u32 {
    match item.value {
        ItemValue::Interval { hi, .. } => hi,
        ItemValue::Symbol(_) => 0,
    }
}

/// All patterns tied best for some positive transaction of class `d.target`,
/// each the most specific pattern with its positive cover.
pub fn mine(d: &Dataset, cfg: &MinerConfig) -> MineResult {
    let start = Instant::now();
    let totals = d.totals();
    assert!(totals.pos > 0, "no transaction of class `{}`", d.target);
    let tm = TokenMap::assign(d);
    let search = Search {
        cfg,
        totals,
        state: Mutex::new(CandidateState::new(d, cfg.measure)),
        min_pos: AtomicU64::new(1),
        visited: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        deadline: cfg.time_limit.map(|t| start + t),
        tm,
    };

    let mut root = build_tree(&root_transactions(d, &search.tm), CountStats::new(totals.pos, totals.neg));
    if cfg.threads <= 1 {
        search.mine_context(&mut root, &Pattern::empty(), d, 1);
    } else {
        let branches = search.branches(&mut root, d, 1);
        let next = AtomicUsize::new(0);
        std::thread::scope(|s| {
            for _ in 0..cfg.threads {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Atomic::Relaxed);
                    if i >= branches.len() || search.stopped() {
                        break;
                    }
                    search.visit(&root, &Pattern::empty(), &branches[i], d, 1);
                });
            }
        });
    }

    let state = search.state.into_inner().unwrap();
    let patterns = post_filter(&state, d, cfg.measure);
    let stats = RunStats {
        visited: search.visited.into_inner(),
        recorded: state.candidates.len() as u64,
        sigma_min: state.sigma_min(),
        min_pos_count: state.min_pos,
        elapsed: start.elapsed(),
        truncated: search.stop.into_inner(),
    };
    MineResult { patterns, stats, totals }
}

/// Shrink every interval to the bases of the transactions the pattern
/// covers, dropping intervals that still span the whole range. The cover is
/// unchanged. Returns the pattern and the covered transactions.
pub fn trim(x: &Pattern, d: &Dataset) -> (Pattern, Vec<u32>) {
    let covered: Vec<u32> = (0..d.transactions.len() as u32).filter(|&i| covers(x, &d.transactions[i as usize])).collect();
    let mut items = Vec::with_capacity(x.len());
    for it in x.items() {
        let ItemValue::Interval { .. } = it.value else {
            items.push(*it);
            continue;
        };
        let bases = covered.iter().map(|&i| d.transactions[i as usize].slots[it.attr as usize].expect("covered slot"));
        let (lo, hi) = bases.fold((u32::MAX, 0), |(lo, hi), b| (lo.min(b), hi.max(b + 1)));
        let n = d.attributes[it.attr as usize].n_bases().expect("numeric attribute");
        if covered.is_empty() {
            items.push(*it);
        } else if !(lo == 0 && hi == n) {
            items.push(Item::interval(it.attr, lo, hi));
        }
    }
    (Pattern::new(items).expect("attributes unchanged"), covered)
}

/// Closedness on the positives, then best covering, over the recorded
/// candidates. Sorted by score descending, then pattern order.
pub fn post_filter(state: &CandidateState, d: &Dataset, m: Measure) -> Vec<Candidate> {
    let totals = d.totals();
    let mut seen = HashSet::new();
    let mut pool: Vec<(Candidate, Vec<u32>)> = Vec::new();
    for c in state.candidates() {
        if !state.admits(c.score) {
            continue;
        }
        let (pattern, covered) = trim(&c.pattern, d);
        if pattern.is_empty() || !seen.insert(pattern.clone()) {
            continue;
        }
        let pos: Vec<u32> = covered.iter().copied().filter(|&i| d.transactions[i as usize].positive).collect();
        let stats = CountStats::new(pos.len() as u64, (covered.len() - pos.len()) as u64);
        debug_assert_eq!(stats, c.stats);
        pool.push((Candidate { pattern, stats, score: score(m, stats, totals) }, pos));
    }

    let mut groups: HashMap<&[u32], Vec<usize>> = HashMap::new();
    for (i, (_, pos)) in pool.iter().enumerate() {
        groups.entry(pos.as_slice()).or_default().push(i);
    }
    let closed: Vec<usize> = (0..pool.len())
        .filter(|&i| {
            groups[pool[i].1.as_slice()]
                .iter()
                .all(|&j| !strictly_subsumes_pattern(&pool[i].0.pattern, &pool[j].0.pattern))
        })
        .collect();

    let mut best: Vec<Option<Score>> = vec![None; d.transactions.len()];
    for &i in &closed {
        for &t in &pool[i].1 {
            let b = &mut best[t as usize];
            if b.is_none_or(|b| compare(pool[i].0.score, b) == Ordering::Greater) {
                *b = Some(pool[i].0.score);
            }
        }
    }
    let mut out: Vec<Candidate> = closed
        .into_iter()
        .filter(|&i| pool[i].1.iter().any(|&t| best[t as usize].is_some_and(|b| compare(pool[i].0.score, b) == Ordering::Equal)))
        .map(|i| pool[i].0.clone())
        .collect();
    sort_output(&mut out);
    out
}

/// Score descending, then canonical pattern order.
pub fn sort_output(v: &mut [Candidate]) {
    v.sort_by(|a, b| compare(b.score, a.score).then_with(|| a.pattern.cmp(&b.pattern)));
}
