//! Dual-monotonic relevance measures, their optimistic upper bounds, and the
//! inversion of the pruning condition into a minimum positive support.
//!
//! The F-score and support difference are kept as exact rationals so ties
//! between patterns are detected exactly. χ² and information gain are
//! floating point and compare after rounding to 10⁻¹²; their formulas are the
//! usual 2×2 contingency ones (information gain in nats).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::Error;
use crate::model::{ClassTotals, CountStats};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    #[default]
    FScore,
    SupportDifference,
    ChiSquare,
    InformationGain,
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "fscore" | "f" | "dice" => Ok(Measure::FScore),
            "suppdiff" | "support_difference" => Ok(Measure::SupportDifference),
            "chi2" | "chi_square" => Ok(Measure::ChiSquare),
            "infogain" | "information_gain" => Ok(Measure::InformationGain),
            other => Err(Error::InvalidValue(format!("unknown measure `{other}`"))),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::FScore => "fscore",
            Measure::SupportDifference => "suppdiff",
            Measure::ChiSquare => "chi2",
            Measure::InformationGain => "infogain",
        })
    }
}

const APPROX_SCALE: f64 = 1e12;

/// A relevance value, or a threshold on `p(x|c)` produced by
/// [`solve_min_support`].
#[derive(Clone, Copy, Debug)]
pub enum Score {
    Exact(Ratio<i64>),
    Approx(f64),
}

impl Score {
    pub fn ratio(num: i64, den: i64) -> Score {
        Score::Exact(Ratio::new(num, den))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Score::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Score::Approx(v) => v,
        }
    }

    /// Reduced `(numerator, denominator)` for exact scores.
    pub fn as_fraction(self) -> Option<(i64, i64)> {
        match self {
            Score::Exact(r) => {
                let r = r.reduced();
                Some((*r.numer(), *r.denom()))
            }
            Score::Approx(_) => None,
        }
    }

    /// Decimal rendering with `digits` fractional digits, rounding half to
    /// even (exactly, for rational scores).
    pub fn to_decimal(self, digits: u32) -> String {
        match self {
            Score::Exact(r) => round_half_even(*r.numer() as i128, *r.denom() as i128, digits),
            Score::Approx(v) => format!("{:.*}", digits as usize, v),
        }
    }
}

fn round_half_even(num: i128, den: i128, digits: u32) -> String {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let neg = num < 0;
    let scaled = num.abs() * 10i128.pow(digits);
    let mut q = scaled / den;
    let r = scaled % den;
    match (2 * r).cmp(&den) {
        Ordering::Greater => q += 1,
        Ordering::Equal if q % 2 == 1 => q += 1,
        _ => {}
    }
    let pow = 10i128.pow(digits);
    let sign = if neg && q != 0 { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{q}")
    } else {
        format!("{sign}{}.{:0width$}", q / pow, q % pow, width = digits as usize)
    }
}

/// Exact for two rational scores; otherwise after rounding both sides to
/// 10⁻¹², so nearly-equal real scores count as ties.
pub fn compare(a: Score, b: Score) -> Ordering {
    match (a, b) {
        // denominators are positive
        (Score::Exact(x), Score::Exact(y)) => {
            (*x.numer() as i128 * *y.denom() as i128).cmp(&(*y.numer() as i128 * *x.denom() as i128))
        }
        _ => {
            debug_assert!(
                matches!((a, b), (Score::Approx(_), Score::Approx(_))),
                "comparing scores of different measures"
            );
            let x = (a.to_f64() * APPROX_SCALE).round();
            let y = (b.to_f64() * APPROX_SCALE).round();
            x.partial_cmp(&y).unwrap_or(Ordering::Equal)
        }
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Self) -> bool {
        compare(*self, *other) == Ordering::Equal
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(*self, *other)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(3))
    }
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Entropy (nats) of a split with counts `k` and `m - k`.
fn entropy(k: f64, m: f64) -> f64 {
    if m <= 0.0 {
        return 0.0;
    }
    -(xlogx(k / m) + xlogx((m - k) / m))
}

/// Mutual information between class and coverage, with possibly
/// fractional covered counts (needed when inverting the bound).
fn info_gain(a: f64, b: f64, t: ClassTotals) -> f64 {
    let (np, nn) = (t.pos as f64, t.neg as f64);
    let n = np + nn;
    let covered = a + b;
    let rest = n - covered;
    let h = entropy(np, n);
    let cond = (covered / n) * entropy(a, covered) + (rest / n) * entropy(np - a, rest);
    (h - cond).max(0.0)
}

fn chi_square(a: f64, b: f64, t: ClassTotals) -> f64 {
    let (np, nn) = (t.pos as f64, t.neg as f64);
    let (c, d) = (np - a, nn - b);
    let n = np + nn;
    let denom = (a + b) * (c + d) * np * nn;
    if denom <= 0.0 {
        return 0.0;
    }
    let det = a * d - b * c;
    n * det * det / denom
}

/// `R_c` from exact counts.
pub fn score(m: Measure, s: CountStats, t: ClassTotals) -> Score {
    debug_assert!(t.pos > 0 && s.n_pos <= t.pos && s.n_neg <= t.neg);
    let (a, b) = (s.n_pos as i64, s.n_neg as i64);
    let (np, nn) = (t.pos as i64, t.neg as i64);
    match m {
        // 2p(x,c) / (p(c) + p(x)) with the 1/N cleared
        Measure::FScore => Score::Exact(Ratio::new_raw(2 * a, np + a + b)),
        Measure::SupportDifference => {
            if nn == 0 {
                Score::Exact(Ratio::new_raw(a, np))
            } else {
                Score::Exact(Ratio::new_raw(a * nn - b * np, np * nn))
            }
        }
        Measure::ChiSquare => Score::Approx(chi_square(a as f64, b as f64, t)),
        Measure::InformationGain => Score::Approx(info_gain(a as f64, b as f64, t)),
    }
}

/// The measure with the negative support forced to zero.
pub fn upper_bound(m: Measure, s: CountStats, t: ClassTotals) -> Score {
    score(m, CountStats::new(s.n_pos, 0), t)
}

/// The upper bound as a function of a real positive support `p = p(x|c)`.
pub fn bound_at_support(m: Measure, p: f64, t: ClassTotals) -> f64 {
    let a = p * t.pos as f64;
    match m {
        Measure::FScore => 2.0 * p / (1.0 + p),
        Measure::SupportDifference => p,
        Measure::ChiSquare => chi_square(a, 0.0, t),
        Measure::InformationGain => info_gain(a, 0.0, t),
    }
}

/// Largest value the measure can take.
pub fn max_score(m: Measure, t: ClassTotals) -> Score {
    upper_bound(m, CountStats::new(t.pos, 0), t)
}

fn above_one() -> Score {
    Score::Approx(1.0 + f64::EPSILON)
}

/// The least `p(x|c)` whose upper bound reaches `target`: any pattern with
/// lower positive support, and all its extensions, score below `target`.
pub fn solve_min_support(m: Measure, target: Score, t: ClassTotals) -> Score {
    if compare(target, max_score(m, t)) == Ordering::Greater {
        return above_one();
    }
    if target.to_f64() <= 0.0 {
        return match target {
            Score::Exact(_) => Score::ratio(0, 1),
            Score::Approx(_) => Score::Approx(0.0),
        };
    }
    match (m, target) {
        // 2p/(1+p) = F  ⇔  p = F/(2-F)
        (Measure::FScore, Score::Exact(f)) => Score::Exact(f / (Ratio::from_integer(2) - f)),
        (Measure::SupportDifference, Score::Exact(d)) => Score::Exact(d),
        (Measure::ChiSquare, _) => {
            let (np, nn) = (t.pos as f64, t.neg as f64);
            let (n, x) = (np + nn, target.to_f64());
            Score::Approx((x * n / (n * nn + x * np)).min(1.0))
        }
        (Measure::InformationGain, _) => {
            let x = target.to_f64();
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if info_gain(mid * t.pos as f64, 0.0, t) >= x {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Score::Approx(hi)
        }
        _ => panic!("{m} threshold requested for a score of another measure"),
    }
}

/// The least positive count `k` with `upper_bound(k) ≥ target`, exactly
/// for rational measures; `N_pos + 1` if no count reaches it.
pub fn min_pos_count(m: Measure, target: Score, t: ClassTotals) -> u64 {
    let reaches = |k: u64| compare(upper_bound(m, CountStats::new(k, 0), t), target) != Ordering::Less;
    let (mut lo, mut hi) = (0u64, t.pos + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}
