//! Resultants by the subresultant remainder sequence.

use num_traits::Zero;

use super::Poly;
use crate::scalar::{ExactField, Ring};

/// `Res(f, g) = lc(f)^deg g * prod g(roots of f)` at the actual degrees.
pub fn resultant<R: Ring>(f: &Poly<R>, g: &Poly<R>) -> R {
    if f.is_zero() || g.is_zero() {
        return R::zero();
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut negate = false;
    if a.deg() < b.deg() {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg() == 0 {
        let r = b.lc().pow(a.deg() as u64);
        return if negate { -r } else { r };
    }
    let mut g_ = R::one();
    let mut h = R::one();
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            negate = !negate;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let div = g_.clone() * &h.pow(delta as u64);
        b = r.div_scalar_exact(&div).expect("subresultant division is exact");
        g_ = a.lc();
        h = match delta {
            0 => h,
            1 => g_.clone(),
            _ => g_
                .pow(delta as u64)
                .exact_div(&h.pow(delta as u64 - 1))
                .expect("subresultant division is exact"),
        };
        if b.is_zero() {
            return R::zero();
        }
        if b.deg() == 0 {
            let da = a.deg() as u64;
            let num = b.lc().pow(da);
            let res = if da == 1 {
                num
            } else {
                num.exact_div(&h.pow(da - 1)).expect("subresultant division is exact")
            };
            return if negate { -res } else { res };
        }
    }
}

/// Resultant at formal degrees `df >= deg f`, `dg >= deg g` (Sylvester rows
/// counted from the formal degrees).
pub fn resultant_formal<R: Ring>(f: &Poly<R>, g: &Poly<R>, df: usize, dg: usize) -> R {
    pad_formal(f, g, df, dg, resultant)
}

fn pad_formal<R: Ring>(f: &Poly<R>, g: &Poly<R>, df: usize, dg: usize, res: impl FnOnce(&Poly<R>, &Poly<R>) -> R) -> R {
    let (af, ag) = (f.deg(), g.deg());
    assert!(df >= af || f.is_zero(), "formal degree below actual degree");
    assert!(dg >= ag || g.is_zero(), "formal degree below actual degree");
    if f.is_zero() || g.is_zero() {
        return R::zero();
    }
    let kf = df - af;
    let kg = dg - ag;
    if kf > 0 && kg > 0 {
        return R::zero();
    }
    if df == 0 && dg == 0 {
        return R::one();
    }
    let mut r = res(f, g);
    if kf > 0 {
        r = r * &g.lc().pow(kf as u64);
        if (kf * ag) % 2 == 1 {
            r = -r;
        }
    }
    if kg > 0 {
        r = r * &f.lc().pow(kg as u64);
    }
    r
}

fn t_degree<K: ExactField>(f: &Poly<Poly<K>>) -> usize {
    f.coeffs().iter().filter(|c| !c.is_zero()).map(|c| c.deg()).max().unwrap_or(0)
}

/// `Res_z(f, g)` for `f, g` in `K[t][z]`, by evaluation at integer `t` and
/// interpolation. Agrees with [`resultant`] over `K[t]`.
pub fn resultant_bivariate<K: ExactField>(f: &Poly<Poly<K>>, g: &Poly<Poly<K>>) -> Poly<K> {
    if f.is_zero() || g.is_zero() {
        return Poly::zero();
    }
    let bound = g.deg() * t_degree(f) + f.deg() * t_degree(g);
    let (lf, lg) = (f.lc(), g.lc());
    let mut xs: Vec<K> = Vec::with_capacity(bound + 1);
    let mut ys: Vec<K> = Vec::with_capacity(bound + 1);
    let mut k: i64 = 0;
    while xs.len() <= bound {
        // 0, 1, -1, 2, -2, ...
        let t = K::from_int(if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 });
        k += 1;
        if lf.eval(&t).is_zero() || lg.eval(&t).is_zero() {
            continue;
        }
        let at = |p: &Poly<Poly<K>>| Poly::new(p.coeffs().iter().map(|c| c.eval(&t)).collect());
        ys.push(resultant(&at(f), &at(g)));
        xs.push(t);
    }
    interpolate(&xs, &ys)
}

/// [`resultant_formal`] over `K[t]`, computed as [`resultant_bivariate`].
pub fn resultant_formal_bivariate<K: ExactField>(f: &Poly<Poly<K>>, g: &Poly<Poly<K>>, df: usize, dg: usize) -> Poly<K> {
    pad_formal(f, g, df, dg, resultant_bivariate)
}

/// The polynomial of degree `< xs.len()` through the points, Newton form.
pub fn interpolate<K: ExactField>(xs: &[K], ys: &[K]) -> Poly<K> {
    let n = xs.len();
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            c[i] = (c[i].clone() - &c[i - 1]) / (xs[i].clone() - &xs[i - j]);
        }
    }
    let mut p = Poly::constant(c[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p * &Poly::linear_root(xs[i].clone()) + Poly::constant(c[i].clone());
    }
    p
}

/// Determinant of the Sylvester matrix at formal degrees, by fraction-free
/// elimination. Slow; kept as an independent reference.
pub fn sylvester_determinant<R: Ring>(f: &Poly<R>, g: &Poly<R>, df: usize, dg: usize) -> R {
    let n = df + dg;
    if n == 0 {
        return R::one();
    }
    let mut m = vec![vec![R::zero(); n]; n];
    for i in 0..dg {
        for k in 0..=df {
            m[i][i + k] = f.coeff(df - k);
        }
    }
    for i in 0..df {
        for k in 0..=dg {
            m[dg + i][i + k] = g.coeff(dg - k);
        }
    }
    bareiss(m)
}

fn bareiss<R: Ring>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    let mut sign = false;
    let mut prev = R::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return R::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * &m[k][k] - m[i][k].clone() * &m[k][j];
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::arith::QuadRat;
    use crate::scalar::Ring;

    type G = QuadRat<1>;
    type P = Poly<G>;

    fn p(cs: &[i64]) -> P {
        P::from_ints(cs)
    }

    #[test]
    fn formal_degree_example_over_polynomial_coefficients() {
        // f = 2z, g = z^2 - t with coefficients in K[t]
        let t = P::x();
        let f: Poly<P> = Poly::new(vec![P::zero(), P::constant(G::from_int(2))]);
        let g: Poly<P> = Poly::new(vec![-t.clone(), P::zero(), P::one()]);
        let r = resultant_formal(&f, &g, 1, 2);
        assert_eq!(r, t.scale(&G::from_int(-4)));
        assert_eq!(r, sylvester_determinant(&f, &g, 1, 2));
    }

    #[test]
    fn common_root_and_linear_cases() {
        assert!(resultant(&p(&[-1, 1]), &p(&[-1, 0, 1])).is_zero());
        let a = G::from_ints(3, 1);
        let b = G::from_ints(-2, 5);
        let r = resultant(&P::linear_root(a.clone()), &P::linear_root(b.clone()));
        assert_eq!(r, a - b);
    }

    #[test]
    fn padding_matches_sylvester_determinant() {
        let f = p(&[1, -3, 0, 2]);
        let g = p(&[4, 1, 5]);
        for (df, dg) in [(3, 2), (5, 2), (3, 4), (4, 3), (5, 5)] {
            assert_eq!(resultant_formal(&f, &g, df, dg), sylvester_determinant(&f, &g, df, dg));
        }
    }

    #[test]
    fn bivariate_by_interpolation_matches_subresultants() {
        // coefficients in K[t] of mixed degrees, leading ones vanishing at t = 1
        let c = |cs: &[i64]| P::from_ints(cs);
        let f: Poly<P> = Poly::new(vec![c(&[2, 0, 1]), c(&[-1, 3]), c(&[0, 0, 0, 1]), c(&[-1, 1])]);
        let g: Poly<P> = Poly::new(vec![c(&[1, 1]), c(&[0, 5, -2]), c(&[-1, 1])]);
        assert_eq!(resultant_bivariate(&f, &g), resultant(&f, &g));
        assert_eq!(resultant_formal_bivariate(&f, &g, 4, 3), resultant_formal(&f, &g, 4, 3));
        assert_eq!(resultant_formal_bivariate(&f, &g, 3, 2), sylvester_determinant(&f, &g, 3, 2));
    }

    #[test]
    fn interpolation_recovers_the_polynomial() {
        let f = P::new(vec![G::from_ints(1, -2), G::from_int(0), G::from_ints(3, 1), G::from_int(-4)]);
        let xs: Vec<G> = (0..4).map(G::from_int).collect();
        let ys: Vec<G> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), f);
    }

    #[test]
    fn constants() {
        assert_eq!(resultant(&p(&[3]), &p(&[1, 0, 1])), G::from_int(9));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[3])), G::from_int(9));
    }
}
