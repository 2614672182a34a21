
use super::{DensePoly, PolyError};
use crate::field::Field;

/// Division with remainder of `f` by `g`, both viewed as univariates in
/// variable `var` with coefficients in the remaining variables. The leading
/// coefficient of `g` in `var` must be an invertible constant (monic up to
/// scaling), which covers every oracle use here.
///
/// Returns (q, r) with f = q*g + r and deg_var r < deg_var g.
pub fn divmod_in_var<F: Field>(
    f: &DensePoly<F>,
    g: &DensePoly<F>,
    var: usize,
) -> Result<(DensePoly<F>, DensePoly<F>), PolyError> {
    if g.is_zero() {
        return Err(PolyError::ZeroDivisor);
    }
    let dg = g.degree_in(var);
    let lead = g.leading_coeff_in_var(var);
    if !lead.is_constant() {
        return Err(PolyError::LeadingCoefficientNotInvertible);
    }
    let lead_const = lead
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .expect("nonzero leading coefficient");
    let lead_inv = lead_const
        .inverse()
        .map_err(|_| PolyError::LeadingCoefficientNotInvertible)?;

    let n = f.nvars();
    if dg == 0 {
        return Ok((f.mul_scalar(&lead_inv), DensePoly::zero(n)));
    }
    let mut quot = DensePoly::zero(n);
    let mut rem = f.clone();
    while !rem.is_zero() && rem.degree_in(var) >= dg {
        let dr = rem.degree_in(var);
        // factor = (lc_var(rem) / lc) * var^(dr - dg)
        let lc_rem = rem.coeff_of_var_power(var, dr);
        let mut shift = alloc::vec![0u32; n];
        shift[var] = dr - dg;
        let one = F::one(&lead_inv.context());
        let factor = lc_rem
            .mul_scalar(&lead_inv)
            .mul(&DensePoly::monomial(n, shift, one));
        quot = quot.add(&factor);
        rem = rem.sub(&factor.mul(g));
    }
    Ok((quot, rem))
}

/// Univariate division with remainder (single-variable polynomials).
pub fn divmod_univar<F: Field>(
    f: &DensePoly<F>,
    g: &DensePoly<F>,
) -> Result<(DensePoly<F>, DensePoly<F>), PolyError> {
    assert_eq!(f.nvars(), 1);
    assert_eq!(g.nvars(), 1);
    divmod_in_var(f, g, 0)
}

/// Monic gcd of univariate polynomials over a field; errors when both are
/// zero.
pub fn gcd_univar<F: Field>(
    f: &DensePoly<F>,
    g: &DensePoly<F>,
) -> Result<DensePoly<F>, PolyError> {
    assert_eq!(f.nvars(), 1);
    assert_eq!(g.nvars(), 1);
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = euclid_rem(&a, &b)?;
        a = b;
        b = r;
    }
    Ok(make_monic(&a))
}

/// Remainder in the univariate Euclid loop; the divisor's leading
/// coefficient is a field constant, so plain long division applies after
/// normalizing.
fn euclid_rem<F: Field>(a: &DensePoly<F>, b: &DensePoly<F>) -> Result<DensePoly<F>, PolyError> {
    let bm = make_monic(b);
    let (_, r) = divmod_univar(a, &bm)?;
    Ok(r)
}

/// Scales a nonzero univariate polynomial monic.
pub fn make_monic<F: Field>(p: &DensePoly<F>) -> DensePoly<F> {
    if p.is_zero() {
        return p.clone();
    }
    let d = p.degree_in(0);
    let lc = p
        .coeff(&[d])
        .expect("leading coefficient present")
        .clone();
    let inv = lc.inverse().expect("field constant invertible");
    p.mul_scalar(&inv)
}
