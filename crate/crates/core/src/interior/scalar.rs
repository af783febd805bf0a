//! The closed-form curvature polynomial `s_{d²}` in `C^{(3)}`, `C^{(4)}`.
//!
//! Contractions against `g ⊗ g` are Gaussian moments: for `Z ~ N(0, g^{−1})`,
//! `C⁴(g⊗g) = E[C⁴(Z)]` and `(C³⊗C³)(g⊗g⊗g) = E[C³(Z)²]`, evaluated exactly by
//! Wick's theorem.  The polynomial uses only the forms at the chart origin,
//! not their base-point derivatives, so it reproduces the interior part of
//! `c_2` on charts whose forms do not depend on the base point and is not a
//! pointwise identity in general.

use super::engine::{rat_inverse, InteriorError};
use super::index::{frak_c_hat, ConstantSigns};
use crate::expr::Rat;
use crate::geometry::{dsq_series, positive_definite, Chart};

type Form = Vec<(Vec<usize>, Rat)>;

/// Sum over perfect matchings of `idx` of `Π g[a][b]`.
fn wick(idx: &[usize], g: &[Vec<Rat>]) -> Rat {
    if idx.is_empty() {
        return Rat::ONE;
    }
    if idx.len() % 2 == 1 {
        return Rat::ZERO;
    }
    let first = idx[0];
    let mut total = Rat::ZERO;
    for k in 1..idx.len() {
        let w = &g[first][idx[k]];
        if w.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|(i, _)| i + 1 != k).map(|(_, v)| *v).collect();
        total = &total + &(w * &wick(&rest, g));
    }
    total
}

fn expand(beta: &[u32]) -> Vec<usize> {
    beta.iter().enumerate().flat_map(|(v, e)| std::iter::repeat(v).take(*e as usize)).collect()
}

/// The metric and the forms of degree 3 and 4 at the chart origin.
fn origin_forms(chart: &Chart, n: usize) -> Result<(Vec<Vec<Rat>>, Form, Form), InteriorError> {
    let d2 = dsq_series(chart, n, [0, 4])?;
    let mut h = vec![vec![Rat::ZERO; n]; n];
    let (mut c3, mut c4) = (Form::new(), Form::new());
    for (e, c) in d2.terms() {
        if e[..n].iter().any(|a| *a > 0) {
            continue;
        }
        let idx = expand(&e[n..]);
        let c = c.re.clone();
        match idx.len() {
            2 if idx[0] == idx[1] => h[idx[0]][idx[0]] = c,
            2 => {
                let half = &c / &Rat::int(2);
                h[idx[0]][idx[1]] = half.clone();
                h[idx[1]][idx[0]] = half;
            }
            3 => c3.push((idx, c)),
            4 => c4.push((idx, c)),
            _ => {}
        }
    }
    if !positive_definite(&h) {
        return Err(InteriorError::NotPositiveDefinite(chart.id().to_string()));
    }
    Ok((h, c3, c4))
}

/// `(C⁴(g⊗g), (C³⊗C³)(g⊗g⊗g))` at the chart origin.
pub fn form_contractions(chart: &Chart, n: usize) -> Result<(Rat, Rat), InteriorError> {
    let (h, c3, c4) = origin_forms(chart, n)?;
    let g = rat_inverse(&h);
    let mut e4 = Rat::ZERO;
    for (idx, c) in &c4 {
        e4 = &e4 + &(c * &wick(idx, &g));
    }
    let mut e33 = Rat::ZERO;
    for (a, ca) in &c3 {
        for (b, cb) in &c3 {
            let mut idx = a.clone();
            idx.extend_from_slice(b);
            e33 = &e33 + &(&(ca * cb) * &wick(&idx, &g));
        }
    }
    Ok((e4, e33))
}

/// `s_{d²}` at the chart origin, by the closed-form polynomial.
pub fn scalar_like(chart: &Chart, n: usize, signs: ConstantSigns) -> Result<Rat, InteriorError> {
    if n == 1 {
        return Err(InteriorError::OneDimensional);
    }
    if n > 4 {
        return Err(InteriorError::Dimension(n));
    }
    let (e4, e33) = form_contractions(chart, n)?;
    let ratio = &frak_c_hat(2, n as u32, signs).value / &frak_c_hat(1, n as u32, signs).value;
    let three = Rat::int(3);
    if n == 3 {
        let inner = &(&Rat::int(10) * &e4) - &(&ratio * &e33);
        return Ok(&three * &inner);
    }
    let ni = n as i64;
    let k = &(&three * &ratio) * &Rat::int((ni + 5) * (ni * ni - 9));
    Ok(&(&three * &e4) - &(&k * &e33))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wick_moments() {
        let id = vec![vec![Rat::ONE, Rat::ZERO], vec![Rat::ZERO, Rat::ONE]];
        assert_eq!(wick(&[0, 0, 0, 0], &id), Rat::int(3));
        assert_eq!(wick(&[0, 0, 1, 1], &id), Rat::ONE);
        assert_eq!(wick(&[0, 0, 0, 0, 0, 0], &id), Rat::int(15));
        assert_eq!(wick(&[0, 1, 0], &id), Rat::ZERO);
    }
}
