//! Finite two-player games: payoffs, pure Nash equilibria, evolutionary
//! stability, Pareto optimality and 2x2 zero-sum values.
//!
//! Both payoff matrices are indexed by the owner's strategy first: `a[i][j]`
//! is A's payoff when A plays `i` and B plays `j`, and `b[j][i]` is B's payoff
//! in the same outcome. Under this layout a game is symmetric when `b == a`
//! and zero-sum when `b == -aᵀ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ w_i = 1` for mixed strategies.
pub const STRATEGY_SUM_TOL: f64 = 1e-12;
/// Payoff differences at or below this are treated as ties.
pub const PAYOFF_TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

/// Probability distribution over a player's pure strategies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_simplex(&weights, STRATEGY_SUM_TOL)?;
        Ok(MixedStrategy(weights))
    }

    pub fn pure(n: usize, k: usize) -> Self {
        assert!(k < n, "pure strategy index out of range");
        let mut w = vec![0.0; n];
        w[k] = 1.0;
        MixedStrategy(w)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        MixedStrategy(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the pure strategy this is, if any.
    pub fn as_pure(&self) -> Option<usize> {
        let k = self.0.iter().position(|&w| w == 1.0)?;
        self.0.iter().enumerate().all(|(i, &w)| i == k || w == 0.0).then_some(k)
    }
}

pub(crate) fn check_simplex(weights: &[f64], tol: f64) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(0.0..=1.0).contains(*w)) {
        return Err(Error::InvalidDistribution(format!("component {i} = {w} outside [0, 1]")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::InvalidDistribution(format!("components sum to {sum}")));
    }
    Ok(())
}

/// On-disk form of a game: `{"A": [[...]], "B": [[...]], "labels": [...]}`.
///
/// `B` may be omitted for a symmetric game, in which case it equals `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameDocument {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Two-player game with `n` strategies for A and `m` for B.
#[derive(Clone, Debug, PartialEq)]
pub struct BimatrixGame {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

/// Pure strategy pair `(A's index, B's index)`.
pub type PureProfile = (usize, usize);

fn check_matrix(m: &[Vec<f64>], rows: usize, cols: usize, name: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::dims(format!("{name}: {rows}x{cols}"), format!("{} rows", m.len())));
    }
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} has non-finite entries")));
    }
    Ok(())
}

impl BimatrixGame {
    /// `a` is `n x m`, `b` is `m x n`.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> Result<Self> {
        let n = a.len();
        let m = a.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::dims("n >= 1, m >= 1", format!("{n}x{m}")));
        }
        check_matrix(&a, n, m, "A")?;
        check_matrix(&b, m, n, "B")?;
        Ok(BimatrixGame { a, b, labels: None })
    }

    /// Symmetric game where both players use payoff matrix `a`.
    pub fn symmetric(a: Vec<Vec<f64>>) -> Result<Self> {
        if a.iter().any(|r| r.len() != a.len()) {
            return Err(Error::NotSymmetric("payoff matrix not square".into()));
        }
        Self::new(a.clone(), a)
    }

    /// 2x2 game from the classic prisoner's-dilemma constants: reward,
    /// sucker, temptation, punishment.
    pub fn prisoners_dilemma(r: f64, s: f64, t: f64, p: f64) -> Self {
        let mut g = Self::symmetric(vec![vec![r, s], vec![t, p]]).expect("finite payoffs");
        g.labels = Some(vec!["C".into(), "D".into()]);
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn from_document(doc: &GameDocument) -> Result<Self> {
        let b = doc.b.clone().unwrap_or_else(|| doc.a.clone());
        let mut g = Self::new(doc.a.clone(), b)?;
        g.labels = doc.labels.clone();
        Ok(g)
    }

    pub fn to_document(&self) -> GameDocument {
        GameDocument { a: self.a.clone(), b: Some(self.b.clone()), labels: self.labels.clone() }
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<f64>] {
        &self.b
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Strategy counts `(n, m)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.a.len(), self.a[0].len())
    }

    pub fn is_symmetric(&self) -> bool {
        let (n, m) = self.shape();
        n == m && self.a == self.b
    }

    pub fn is_zero_sum(&self) -> bool {
        let (n, m) = self.shape();
        (0..n).all(|i| (0..m).all(|j| self.a[i][j] == -self.b[j][i]))
    }

    /// Payoffs `(to A, to B)` when A plays `i` and B plays `j`.
    pub fn outcome(&self, i: usize, j: usize) -> (f64, f64) {
        (self.a[i][j], self.b[j][i])
    }

    /// `pᵀ A q` for A, `qᵀ B p` for B, with `p` A's strategy and `q` B's.
    pub fn expected_payoff(&self, p: &MixedStrategy, q: &MixedStrategy, player: Player) -> Result<f64> {
        let (n, m) = self.shape();
        if p.len() != n || q.len() != m {
            return Err(Error::dims(format!("strategies of length {n} and {m}"), format!("{} and {}", p.len(), q.len())));
        }
        Ok(match player {
            Player::A => bilinear(&self.a, p.weights(), q.weights()),
            Player::B => bilinear(&self.b, q.weights(), p.weights()),
        })
    }

    /// All pure profiles in which each strategy is a best reply to the other.
    /// Ties count as best replies.
    pub fn pure_nash_equilibria(&self) -> Vec<PureProfile> {
        let (n, m) = self.shape();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..m {
                let a_best = (0..n).all(|k| self.a[i][j] >= self.a[k][j]);
                let b_best = (0..m).all(|l| self.b[j][i] >= self.b[l][i]);
                if a_best && b_best {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Pure outcomes not weakly dominated (with one strict improvement) by any
    /// other pure outcome.
    pub fn pareto_optimal_outcomes(&self) -> Vec<PureProfile> {
        let (n, m) = self.shape();
        let cells: Vec<(PureProfile, (f64, f64))> =
            (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).map(|c| (c, self.outcome(c.0, c.1))).collect();
        cells
            .iter()
            .filter(|(_, (ua, ub))| {
                !cells.iter().any(|(_, (va, vb))| va >= ua && vb >= ub && (va > ua || vb > ub))
            })
            .map(|(c, _)| *c)
            .collect()
    }

    /// Interior mixed equilibrium of a 2x2 game from the indifference
    /// conditions, if one exists. Returns `(A's strategy, B's strategy)`.
    pub fn mixed_nash_2x2(&self) -> Option<(MixedStrategy, MixedStrategy)> {
        if self.shape() != (2, 2) {
            return None;
        }
        let a = &self.a;
        let b = &self.b;
        // q makes A indifferent between rows, p makes B indifferent between columns
        let da = a[0][0] - a[0][1] - a[1][0] + a[1][1];
        let db = b[0][0] - b[0][1] - b[1][0] + b[1][1];
        if da == 0.0 || db == 0.0 {
            return None;
        }
        let q = (a[1][1] - a[0][1]) / da;
        let p = (b[1][1] - b[0][1]) / db;
        if !(0.0 < p && p < 1.0 && 0.0 < q && q < 1.0) {
            return None;
        }
        Some((MixedStrategy(vec![p, 1.0 - p]), MixedStrategy(vec![q, 1.0 - q])))
    }

    /// Value and optimal strategies of a 2x2 zero-sum game.
    pub fn minimax_value(&self) -> Result<MinimaxSolution> {
        if self.shape() != (2, 2) {
            return Err(Error::dims("2x2 game", format!("{:?}", self.shape())));
        }
        if !self.is_zero_sum() {
            return Err(Error::NotZeroSum("B != -Aᵀ".into()));
        }
        let a = &self.a;
        let row_mins: Vec<f64> = a.iter().map(|r| r[0].min(r[1])).collect();
        let col_maxs: Vec<f64> = (0..2).map(|j| a[0][j].max(a[1][j])).collect();
        let maximin = row_mins[0].max(row_mins[1]);
        let minimax = col_maxs[0].min(col_maxs[1]);
        if maximin == minimax {
            let i = if row_mins[0] >= row_mins[1] { 0 } else { 1 };
            let j = if col_maxs[0] <= col_maxs[1] { 0 } else { 1 };
            return Ok(MinimaxSolution {
                value: maximin,
                row: MixedStrategy::pure(2, i),
                column: MixedStrategy::pure(2, j),
                saddle_point: Some((i, j)),
            });
        }
        // no saddle point, so the denominator is non-zero
        let den = a[0][0] - a[0][1] - a[1][0] + a[1][1];
        let p = (a[1][1] - a[1][0]) / den;
        let q = (a[1][1] - a[0][1]) / den;
        let value = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / den;
        Ok(MinimaxSolution {
            value,
            row: MixedStrategy(vec![p, 1.0 - p]),
            column: MixedStrategy(vec![q, 1.0 - q]),
            saddle_point: None,
        })
    }

    /// Checks the two evolutionary-stability conditions for `p` against every
    /// pure strategy and each of `extra` candidates.
    ///
    /// Stability is only verified against this finite candidate set, which is
    /// exact for 2x2 games.
    pub fn is_ess(&self, p: &MixedStrategy, extra: &[MixedStrategy]) -> Result<EssVerdict> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric("ESS requires b == a".into()));
        }
        let n = self.a.len();
        if p.len() != n {
            return Err(Error::dims(n, p.len()));
        }
        if let Some(bad) = extra.iter().find(|r| r.len() != n) {
            return Err(Error::dims(n, bad.len()));
        }
        let e = |x: &MixedStrategy, y: &MixedStrategy| bilinear(&self.a, x.weights(), y.weights());
        let e_pp = e(p, p);
        let candidates = (0..n).map(|k| MixedStrategy::pure(n, k)).chain(extra.iter().cloned());
        for r in candidates {
            let same = r.weights().iter().zip(p.weights()).all(|(x, y)| (x - y).abs() < 1e-12);
            if same {
                continue;
            }
            let gap = e_pp - e(&r, p);
            if gap > PAYOFF_TIE_TOL {
                continue;
            }
            if gap < -PAYOFF_TIE_TOL {
                return Ok(EssVerdict { is_ess: false, violator: Some(r), failed: Some(EssCondition::Equilibrium) });
            }
            if e(p, &r) - e(&r, &r) <= PAYOFF_TIE_TOL {
                return Ok(EssVerdict { is_ess: false, violator: Some(r), failed: Some(EssCondition::Stability) });
            }
        }
        Ok(EssVerdict { is_ess: true, violator: None, failed: None })
    }
}

fn bilinear(m: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    m.iter().zip(x).map(|(row, xi)| xi * row.iter().zip(y).map(|(a, yj)| a * yj).sum::<f64>()).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimaxSolution {
    pub value: f64,
    pub row: MixedStrategy,
    pub column: MixedStrategy,
    pub saddle_point: Option<PureProfile>,
}

/// Which of the two ESS conditions an invader broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EssCondition {
    /// `E(p,p) > E(r,p)` failed outright.
    Equilibrium,
    /// Tie in the first condition and `E(p,r) > E(r,r)` failed.
    Stability,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EssVerdict {
    pub is_ess: bool,
    pub violator: Option<MixedStrategy>,
    pub failed: Option<EssCondition>,
}
