//! Finite-dimensional Lie algebras by structure constants, evaluation of
//! universal series in them, and the function `J(x) = det((1 − e^{−ad_x})/ad_x)`.

pub mod flow;
pub mod function;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicSeries;
use crate::error::{Error, Result};
use crate::freelie::LieSeries;
use crate::scalar::{fmt_rational, parse_rational, rat, rat_int, Poly, Rational};
use crate::series::{AnalyticFn, UniSeries};
use crate::words::{LyndonWord, Word};

pub use function::{mat_mul, mat_trace, mat_vec, FnMatrix, TruncatedFunction};

/// Lie algebra with basis `e_0, …, e_{d−1}` and `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct StructLie {
    pub name: String,
    dim: usize,
    c: Vec<Vec<Vec<Rational>>>,
}

pub type Vector = Vec<Rational>;
pub type Matrix = Vec<Vec<Rational>>;

impl StructLie {
    /// Builds the algebra from `(i, j, k, c^k_{ij})` entries. Entries for
    /// `(j, i)` are filled in by antisymmetry when absent; the result is
    /// checked for antisymmetry and the Jacobi identity.
    pub fn new(name: impl Into<String>, dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let mut c = vec![vec![vec![None::<Rational>; dim]; dim]; dim];
        for (i, j, k, v) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::InvalidStructure(format!("index out of range in ({i},{j},{k})")));
            }
            c[*i][*j][*k] = Some(v.clone());
        }
        let mut dense = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    dense[i][j][k] = match (&c[i][j][k], &c[j][i][k]) {
                        (Some(v), _) => v.clone(),
                        (None, Some(w)) => -w.clone(),
                        (None, None) => Rational::zero(),
                    };
                }
            }
        }
        let g = StructLie {
            name: name.into(),
            dim,
            c: dense,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.c[i][j][k] != -self.c[j][i][k].clone() {
                        return Err(Error::InvalidStructure(format!(
                            "not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let ei = self.basis(i);
                    let ej = self.basis(j);
                    let ek = self.basis(k);
                    let jac = add(
                        &add(
                            &self.bracket(&ei, &self.bracket(&ej, &ek)),
                            &self.bracket(&ej, &self.bracket(&ek, &ei)),
                        ),
                        &self.bracket(&ek, &self.bracket(&ei, &ej)),
                    );
                    if jac.iter().any(|v| !v.is_zero()) {
                        return Err(Error::InvalidStructure(format!(
                            "Jacobi identity fails for ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    pub fn basis(&self, i: usize) -> Vector {
        (0..self.dim).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
    }

    pub fn zero_vector(&self) -> Vector {
        vec![Rational::zero(); self.dim]
    }

    pub fn bracket(&self, a: &[Rational], b: &[Rational]) -> Vector {
        let mut out = self.zero_vector();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let f = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.c[i][j][k];
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad_v` in the basis: column `j` holds `[v, e_j]`.
    pub fn ad(&self, v: &[Rational]) -> Matrix {
        let mut m = vec![vec![Rational::zero(); self.dim]; self.dim];
        for j in 0..self.dim {
            let col = self.bracket(v, &self.basis(j));
            for (k, val) in col.into_iter().enumerate() {
                m[k][j] = val;
            }
        }
        m
    }

    /// `ad_x` with `x = Σ x_i e_i` symbolic in variables `offset..offset+d`
    /// of a function space with `nvars` variables.
    pub fn ad_symbolic(&self, nvars: usize, offset: usize, cap: usize) -> FnMatrix {
        let d = self.dim;
        let mut m = vec![vec![TruncatedFunction::zero(nvars, cap); d]; d];
        for (k, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                for i in 0..d {
                    let c = &self.c[i][j][k];
                    if !c.is_zero() {
                        *entry = entry.add(&TruncatedFunction::var(offset + i, nvars, cap).scale_rat(c));
                    }
                }
            }
        }
        m
    }

    /// Structure-constant bracket on vectors of functions.
    pub fn bracket_fn(&self, a: &[TruncatedFunction], b: &[TruncatedFunction]) -> Vec<TruncatedFunction> {
        let proto = &a[0];
        let mut out = vec![TruncatedFunction::zero(proto.nvars(), proto.cap()); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai.mul(bj);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.c[i][j][k];
                    if !c.is_zero() {
                        *o = o.add(&prod.scale_rat(c));
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(Zero::is_zero)
    }

    /// Nilpotency index: smallest `k` with all `k`-fold brackets zero, if
    /// at most `dim + 1`.
    pub fn nilpotency(&self) -> Option<usize> {
        let d = self.dim;
        let mut span: Vec<Vector> = (0..d).map(|i| self.basis(i)).collect();
        for k in 1..=d + 1 {
            if span.iter().all(|v| v.iter().all(Zero::is_zero)) {
                return Some(k);
            }
            let mut next = Vec::new();
            for v in &span {
                for i in 0..d {
                    let b = self.bracket(&self.basis(i), v);
                    if b.iter().any(|x| !x.is_zero()) {
                        next.push(b);
                    }
                }
            }
            span = reduce_span(next);
        }
        None
    }
}

fn reduce_span(vs: Vec<Vector>) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vs {
        let mut v = v;
        for b in &basis {
            let p = b.iter().position(|x| !x.is_zero()).unwrap();
            if !v[p].is_zero() {
                let f = &v[p] / &b[p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            basis.push(v);
        }
    }
    basis
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], c: &Rational) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn mat_mul_rat(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

impl fmt::Debug for StructLie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructLie({}, dim {})", self.name, self.dim)
    }
}

/// Built-in algebras: `abelian(n)` (or `abelianN`), `heisenberg3`,
/// `solvable2`, `sl2` (basis `e, f, h`).
pub fn builtin(name: &str) -> Result<StructLie> {
    let one = Rational::one;
    match name {
        "heisenberg3" => StructLie::new(name, 3, &[(0, 1, 2, one())]),
        "solvable2" => StructLie::new(name, 2, &[(0, 1, 1, one())]),
        "sl2" => StructLie::new(
            name,
            3,
            &[(0, 1, 2, one()), (2, 0, 0, rat(2, 1)), (2, 1, 1, rat(-2, 1))],
        ),
        _ => {
            let digits = name
                .strip_prefix("abelian")
                .map(|r| r.trim_start_matches('(').trim_end_matches(')'));
            match digits.and_then(|d| d.parse::<usize>().ok()) {
                Some(n) if n > 0 => StructLie::new(format!("abelian({n})"), n, &[]),
                _ => Err(Error::UnknownAlgebra(name.to_string())),
            }
        }
    }
}

/// JSON form `{"dim": d, "c": [[i, j, k, "num/den"], …], "name": …}`.
#[derive(Serialize, Deserialize)]
pub struct StructLieJson {
    pub dim: usize,
    pub c: Vec<(usize, usize, usize, String)>,
    pub name: String,
}

impl StructLie {
    pub fn to_json(&self) -> StructLieJson {
        let mut c = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    if !self.c[i][j][k].is_zero() {
                        c.push((i, j, k, fmt_rational(&self.c[i][j][k])));
                    }
                }
            }
        }
        StructLieJson {
            dim: self.dim,
            c,
            name: self.name.clone(),
        }
    }

    pub fn from_json(j: &StructLieJson) -> Result<Self> {
        let entries = j
            .c
            .iter()
            .map(|(i, jj, k, v)| Ok((*i, *jj, *k, parse_rational(v)?)))
            .collect::<Result<Vec<_>>>()?;
        StructLie::new(j.name.clone(), j.dim, &entries)
    }
}

fn check_point(g: &StructLie, xs: &[Vector]) -> Result<()> {
    for v in xs {
        if v.len() != g.dim {
            return Err(Error::Dimension {
                expected: g.dim,
                got: v.len(),
            });
        }
    }
    Ok(())
}

fn eval_lyndon(g: &StructLie, w: &LyndonWord, xs: &[Vector], memo: &mut HashMap<Word, Vector>) -> Vector {
    if let Some(v) = memo.get(w.letters()) {
        return v.clone();
    }
    let v = match w.factorization() {
        None => xs[w.letters()[0] as usize].clone(),
        Some((u, v)) => {
            let a = eval_lyndon(g, &u, xs, memo);
            let b = eval_lyndon(g, &v, xs, memo);
            g.bracket(&a, &b)
        }
    };
    memo.insert(w.letters().to_vec(), v.clone());
    v
}

/// Value of a Lie series at `letter i ↦ xs[i]`; coefficients may depend on
/// `s, t`.
pub fn eval_lie(l: &LieSeries, g: &StructLie, xs: &[Vector]) -> Result<Vec<Poly>> {
    if xs.len() != l.alphabet() {
        return Err(Error::AlphabetMismatch(l.alphabet(), xs.len()));
    }
    check_point(g, xs)?;
    let mut memo = HashMap::new();
    let mut out = vec![Poly::zero(); g.dim];
    for (w, c) in l.terms() {
        let v = eval_lyndon(g, w, xs, &mut memo);
        for (o, vi) in out.iter_mut().zip(v) {
            if !vi.is_zero() {
                *o += &c.scale(&vi);
            }
        }
    }
    Ok(out)
}

/// Value of a cyclic series: the necklace `w` evaluates to
/// `tr(ad_{x_{w_1}} ⋯ ad_{x_{w_k}})`, the empty necklace to `dim g`.
pub fn eval_cyclic(c: &CyclicSeries, g: &StructLie, xs: &[Vector]) -> Result<Poly> {
    if xs.len() != c.alphabet() {
        return Err(Error::AlphabetMismatch(c.alphabet(), xs.len()));
    }
    check_point(g, xs)?;
    let ads: Vec<Matrix> = xs.iter().map(|v| g.ad(v)).collect();
    let mut out = Poly::zero();
    for (w, coeff) in c.terms() {
        let mut m: Matrix = (0..g.dim).map(|i| g.basis(i)).collect();
        for &letter in w {
            m = mat_mul_rat(&m, &ads[letter as usize]);
        }
        let tr = (0..g.dim).fold(Rational::zero(), |acc, i| acc + &m[i][i]);
        out += &coeff.scale(&tr);
    }
    Ok(out)
}

/// Symbolic evaluation: letter `i` becomes the vector of coordinate
/// functions `x^{(i)}_1, …, x^{(i)}_d` (variables `i·d .. (i+1)·d`), cut at
/// total degree `cap`.
pub fn eval_lie_symbolic(l: &LieSeries, g: &StructLie, cap: usize) -> Vec<TruncatedFunction> {
    let d = g.dim;
    let nvars = d * l.alphabet();
    let xs: Vec<Vec<TruncatedFunction>> = (0..l.alphabet())
        .map(|i| (0..d).map(|k| TruncatedFunction::var(i * d + k, nvars, cap)).collect())
        .collect();
    let mut memo: HashMap<Word, Vec<TruncatedFunction>> = HashMap::new();
    fn go(
        g: &StructLie,
        w: &LyndonWord,
        xs: &[Vec<TruncatedFunction>],
        memo: &mut HashMap<Word, Vec<TruncatedFunction>>,
    ) -> Vec<TruncatedFunction> {
        if let Some(v) = memo.get(w.letters()) {
            return v.clone();
        }
        let v = match w.factorization() {
            None => xs[w.letters()[0] as usize].clone(),
            Some((u, v)) => {
                let a = go(g, &u, xs, memo);
                let b = go(g, &v, xs, memo);
                g.bracket_fn(&a, &b)
            }
        };
        memo.insert(w.letters().to_vec(), v.clone());
        v
    }
    let mut out = vec![TruncatedFunction::zero(nvars, cap); d];
    for (w, c) in l.terms() {
        if w.len() > cap {
            continue;
        }
        let v = go(g, w, &xs, &mut memo);
        for (o, vi) in out.iter_mut().zip(&v) {
            *o = o.add(&vi.scale(c));
        }
    }
    out
}

/// Symbolic evaluation of a cyclic series, as a function of the `2d`
/// coordinates of `(x, y)`.
pub fn eval_cyclic_symbolic(c: &CyclicSeries, g: &StructLie, cap: usize) -> TruncatedFunction {
    let d = g.dim;
    let nvars = d * c.alphabet();
    let ads: Vec<FnMatrix> = (0..c.alphabet()).map(|i| g.ad_symbolic(nvars, i * d, cap)).collect();
    let mut out = TruncatedFunction::zero(nvars, cap);
    for (w, coeff) in c.terms() {
        if w.is_empty() {
            out = out.add(&TruncatedFunction::constant(coeff.scale(&rat_int(d as i64)), nvars, cap));
            continue;
        }
        let mut m = ads[w[0] as usize].clone();
        for &letter in &w[1..] {
            m = mat_mul(&m, &ads[letter as usize]);
        }
        out = out.add(&mat_trace(&m).scale(coeff));
    }
    out
}

/// `Σ_k coeffs[k] tr(ad_x^k)` for symbolic `x ∈ g`, `k ≥ 1`.
fn trace_series(g: &StructLie, coeffs: &UniSeries, cap: usize) -> TruncatedFunction {
    let ad = g.ad_symbolic(g.dim, 0, cap);
    let mut power = ad.clone();
    let mut out = TruncatedFunction::zero(g.dim, cap);
    for k in 1..=cap {
        let c = coeffs.coeff(k);
        if !c.is_zero() {
            out = out.add(&mat_trace(&power).scale_rat(&c));
        }
        power = mat_mul(&power, &ad);
    }
    out
}

/// `log J(x) = tr log((1 − e^{−ad_x})/ad_x)` through degree `cap`.
pub fn log_j_function(g: &StructLie, cap: usize) -> TruncatedFunction {
    trace_series(g, &AnalyticFn::LogJ.taylor(cap), cap)
}

/// `J(x) = det((1 − e^{−ad_x})/ad_x)` through degree `cap`, as
/// `exp(tr(log(·)))`.
pub fn j_function(g: &StructLie, cap: usize) -> TruncatedFunction {
    log_j_function(g, cap)
        .exp()
        .expect("log J vanishes at the origin")
}

/// `t·J_t^{−1} J̇_t − tr(t ad_z/(e^{t ad_z} − 1) − 1)` with `J_t(z) = J(tz)`.
/// The factor `t` on the left makes the identity exact:
/// `∂_t log J(tz) = t^{−1} tr(t ad_z/(e^{t ad_z} − 1) − 1)`.
pub fn jdot_check(g: &StructLie, cap: usize) -> TruncatedFunction {
    let log_jt = log_j_function(g, cap).rescale_vars();
    let lhs = log_jt.deriv_t().scale(&Poly::t());
    let rhs = trace_series(g, &AnalyticFn::UOverExpMinusOne.taylor(cap), cap).rescale_vars();
    lhs.sub(&rhs)
}
