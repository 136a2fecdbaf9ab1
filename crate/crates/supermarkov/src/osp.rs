//! 2|1 supermatrices over the Grassmann ring, the elementary holonomy
//! factors, and super Markov numbers read off holonomy products.
//!
//! A supermatrix here is a 3×3 array of Grassmann elements with the block
//! parity pattern of a 2|1 matrix: the upper-left 2×2 block and the (3,3)
//! corner are even, the remaining third-row/third-column entries are odd.
//! The pattern is enforced at construction and after every product — any
//! violation is a sign bug and fails loudly.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grassmann::{AlgebraContext, GrassmannElement};
use crate::scalars::{Scalar, WeightScalar};
use crate::words::{truncated_of, Slope};

/// Positions required to be even (empty or even-length words only).
const EVEN_POSITIONS: [(usize, usize); 5] = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)];
/// Positions required to be odd (odd-length words only).
const ODD_POSITIONS: [(usize, usize); 4] = [(0, 2), (1, 2), (2, 0), (2, 1)];

/// A 3×3 supermatrix with the 2|1 parity pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix<S: Scalar> {
    entries: [[GrassmannElement<S>; 3]; 3],
}

impl<S: Scalar> SuperMatrix<S> {
    /// Build from row-major entries, enforcing the parity pattern.
    pub fn new(entries: [[GrassmannElement<S>; 3]; 3]) -> Result<Self> {
        let m = SuperMatrix { entries };
        m.validate_parity()?;
        Ok(m)
    }

    pub fn identity(ctx: &Arc<AlgebraContext>) -> Self {
        let z = || GrassmannElement::<S>::zero(ctx);
        let o = || GrassmannElement::<S>::one(ctx);
        SuperMatrix {
            entries: [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]],
        }
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        self.entries[0][0].context()
    }

    pub fn entry(&self, row: usize, col: usize) -> &GrassmannElement<S> {
        &self.entries[row][col]
    }

    fn validate_parity(&self) -> Result<()> {
        for (r, c) in EVEN_POSITIONS {
            if !self.entries[r][c].is_even() {
                return Err(Error::ParityViolation { row: r, col: c });
            }
        }
        for (r, c) in ODD_POSITIONS {
            if !self.entries[r][c].is_odd() {
                return Err(Error::ParityViolation { row: r, col: c });
            }
        }
        Ok(())
    }

    /// Ordinary matrix product with Grassmann entry arithmetic; the parity
    /// pattern is re-validated on the result.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let ctx = self.context();
        let mut rows: Vec<[GrassmannElement<S>; 3]> = Vec::with_capacity(3);
        for i in 0..3 {
            let mut row: Vec<GrassmannElement<S>> = Vec::with_capacity(3);
            for j in 0..3 {
                let mut acc = GrassmannElement::<S>::zero(ctx);
                for k in 0..3 {
                    acc = acc.add(&self.entries[i][k].mul(&other.entries[k][j]));
                }
                row.push(acc);
            }
            rows.push(row.try_into().expect("three entries per row"));
        }
        Self::new(rows.try_into().expect("three rows"))
    }

    /// Render as bracketed rows of entry renderings.
    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|e| e.render()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Row-major JSON: three rows of three `{"body","soul"}` objects.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|row| {
                    serde_json::Value::Array(row.iter().map(|e| e.to_json()).collect())
                })
                .collect(),
        )
    }
}

/// The triangle-crossing factor: lower-triangular step with ratio `h` and
/// odd decoration `√h·g` for a μ-invariant generator `g`.
pub fn triangle_matrix<S: WeightScalar>(
    h: &S,
    g: &GrassmannElement<S>,
) -> Result<SuperMatrix<S>> {
    let ctx = g.context();
    let sqrt_h = h.monomial_sqrt()?;
    let sg = g.scale(&sqrt_h);
    let z = || GrassmannElement::<S>::zero(ctx);
    let o = || GrassmannElement::<S>::one(ctx);
    SuperMatrix::new([
        [o(), z(), z()],
        [GrassmannElement::from_scalar(ctx, h.neg()), o(), sg.clone()],
        [sg.neg(), z(), o()],
    ])
}

/// Inverse of [`triangle_matrix`].
pub fn triangle_matrix_inv<S: WeightScalar>(
    h: &S,
    g: &GrassmannElement<S>,
) -> Result<SuperMatrix<S>> {
    let ctx = g.context();
    let sqrt_h = h.monomial_sqrt()?;
    let sg = g.scale(&sqrt_h);
    let z = || GrassmannElement::<S>::zero(ctx);
    let o = || GrassmannElement::<S>::one(ctx);
    SuperMatrix::new([
        [o(), z(), z()],
        [GrassmannElement::from_scalar(ctx, h.clone()), o(), sg.neg()],
        [sg, z(), o()],
    ])
}

/// The arc-crossing factor for an arc of λ-length `lambda`: rotates the
/// even plane with weights (−λ, 1/λ).
pub fn edge_matrix<S: WeightScalar>(
    ctx: &Arc<AlgebraContext>,
    lambda: &S,
) -> Result<SuperMatrix<S>> {
    let z = || GrassmannElement::<S>::zero(ctx);
    let o = || GrassmannElement::<S>::one(ctx);
    SuperMatrix::new([
        [z(), GrassmannElement::from_scalar(ctx, lambda.neg()), z()],
        [GrassmannElement::from_scalar(ctx, lambda.inv()?), z(), z()],
        [z(), z(), o()],
    ])
}

/// Inverse of [`edge_matrix`].
pub fn edge_matrix_inv<S: WeightScalar>(
    ctx: &Arc<AlgebraContext>,
    lambda: &S,
) -> Result<SuperMatrix<S>> {
    let z = || GrassmannElement::<S>::zero(ctx);
    let o = || GrassmannElement::<S>::one(ctx);
    SuperMatrix::new([
        [z(), GrassmannElement::from_scalar(ctx, lambda.clone()), z()],
        [
            GrassmannElement::from_scalar(ctx, lambda.inv()?.neg()),
            z(),
            z(),
        ],
        [z(), z(), o()],
    ])
}

/// The reflection diag(−1, −1, 1).
pub fn reflection<S: Scalar>(ctx: &Arc<AlgebraContext>) -> SuperMatrix<S> {
    let z = || GrassmannElement::<S>::zero(ctx);
    let o = || GrassmannElement::<S>::one(ctx);
    SuperMatrix::new([
        [o().neg(), z(), z()],
        [z(), o().neg(), z()],
        [z(), z(), o()],
    ])
    .expect("reflection satisfies the parity pattern")
}

/// Which step matrix of the holonomy word to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepBit {
    /// East step (truncated-word letter 0).
    Zero,
    /// North step (truncated-word letter 1).
    One,
    /// The closing factor applied after the whole word.
    Final,
}

impl From<u8> for StepBit {
    fn from(bit: u8) -> Self {
        match bit {
            0 => StepBit::Zero,
            1 => StepBit::One,
            other => panic!("word letters are 0 or 1, got {other}"),
        }
    }
}

/// The step matrix for one truncated-word letter (or the closing factor),
/// assembled from elementary triangle/arc factors over the λ-lengths
/// x, y, z. With rational scalars every λ is 1 and the printed unit
/// matrices fall out; with Laurent scalars the entries carry half-integer
/// exponents like √(z/(xy)).
pub fn markov_step_matrix<S: WeightScalar>(step: StepBit) -> Result<SuperMatrix<S>> {
    let ctx = AlgebraContext::torus();
    let sigma = GrassmannElement::<S>::generator(&ctx, 0);
    let theta = GrassmannElement::<S>::generator(&ctx, 1);
    let (lx, ly, lz) = (S::lambda("x"), S::lambda("y"), S::lambda("z"));
    let h_x = lx.exact_div(&ly.mul(&lz))?;
    let h_y = ly.exact_div(&lx.mul(&lz))?;
    let h_z = lz.exact_div(&lx.mul(&ly))?;
    match step {
        StepBit::Zero => triangle_matrix(&h_z, &sigma)?
            .mul(&triangle_matrix(&h_x, &theta)?)?
            .mul(&reflection(&ctx))?
            .mul(&triangle_matrix(&h_y, &sigma)?)?
            .mul(&edge_matrix_inv(&ctx, &lx)?),
        StepBit::One => reflection(&ctx)
            .mul(&triangle_matrix_inv(&h_y, &theta)?)?
            .mul(&triangle_matrix_inv(&h_x, &sigma)?)?
            .mul(&edge_matrix(&ctx, &ly)?)?
            .mul(&triangle_matrix_inv(&h_z, &sigma)?),
        StepBit::Final => edge_matrix(&ctx, &lx)?
            .mul(&triangle_matrix_inv(&h_y, &theta)?)?
            .mul(&triangle_matrix_inv(&h_x, &sigma)?)?
            .mul(&edge_matrix(&ctx, &ly)?)?
            .mul(&triangle_matrix_inv(&h_z, &sigma)?),
    }
}

/// Holonomy of the slope-p/q curve: the product
/// `M_fin · M(w̃_k) · ... · M(w̃_1)` over the truncated word w̃
/// (the first letter's matrix is applied first, i.e. stands rightmost).
pub fn markov_holonomy<S: WeightScalar>(s: Slope) -> Result<SuperMatrix<S>> {
    let m0 = markov_step_matrix::<S>(StepBit::Zero)?;
    let m1 = markov_step_matrix::<S>(StepBit::One)?;
    let mut acc = markov_step_matrix::<S>(StepBit::Final)?;
    for &b in truncated_of(s).bits.iter().rev() {
        acc = acc.mul(if b == 1 { &m1 } else { &m0 })?;
    }
    Ok(acc)
}

/// The super Markov value of a slope, read off as the (1,2)-entry of its
/// holonomy matrix.
pub fn sm_via_matrix<S: WeightScalar>(s: Slope) -> Result<GrassmannElement<S>> {
    Ok(markov_holonomy::<S>(s)?.entry(0, 1).clone())
}

/// The six orthosymplectic structure residuals of a supermatrix with
/// entries named `[[a,b,γ],[c,d,δ],[α,β,e]]`, plus the gap between the two
/// equivalent forms of the (3,3) corner.
#[derive(Clone, Debug)]
pub struct OspReport<S: Scalar> {
    /// Left-minus-right residuals of, in order:
    /// e − (1+αβ), e⁻¹ − (ad−bc), α − (cγ−aδ), β − (dγ−bδ),
    /// γ − (aβ−bα), δ − (cβ−dα).
    pub residuals: [GrassmannElement<S>; 6],
    /// αβ − γδ: zero exactly when 1+αβ and 1+γδ agree.
    pub dual_gap: GrassmannElement<S>,
}

impl<S: Scalar> OspReport<S> {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero())
    }
}

/// Evaluate the six structure constraints exactly.
pub fn osp_check<S: Scalar>(g: &SuperMatrix<S>) -> Result<OspReport<S>> {
    let a = g.entry(0, 0);
    let b = g.entry(0, 1);
    let gamma = g.entry(0, 2);
    let c = g.entry(1, 0);
    let d = g.entry(1, 1);
    let delta = g.entry(1, 2);
    let alpha = g.entry(2, 0);
    let beta = g.entry(2, 1);
    let e = g.entry(2, 2);
    let one = GrassmannElement::<S>::one(g.context());

    let r1 = e.sub(&one.add(&alpha.mul(beta)));
    let r2 = e.inv()?.sub(&a.mul(d).sub(&b.mul(c)));
    let r3 = alpha.sub(&c.mul(gamma).sub(&a.mul(delta)));
    let r4 = beta.sub(&d.mul(gamma).sub(&b.mul(delta)));
    let r5 = gamma.sub(&a.mul(beta).sub(&b.mul(alpha)));
    let r6 = delta.sub(&c.mul(beta).sub(&d.mul(alpha)));
    let dual_gap = alpha.mul(beta).sub(&gamma.mul(delta));
    Ok(OspReport {
        residuals: [r1, r2, r3, r4, r5, r6],
        dual_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, LaurentPoly, Rational};
    use proptest::prelude::*;

    type Elem = GrassmannElement<Rational>;
    type WElem = GrassmannElement<LaurentPoly>;

    fn ctx() -> Arc<AlgebraContext> {
        AlgebraContext::torus()
    }

    /// Unit-mode entry from body and sigma*theta coefficient.
    fn even(b: i64, st: i64) -> Elem {
        Elem::from_int(&ctx(), b).add(&Elem::sigma_theta().scale(&rat(st)))
    }

    /// Unit-mode odd entry c_s·sigma + c_t·theta.
    fn odd(cs: i64, ct: i64) -> Elem {
        Elem::generator(&ctx(), 0)
            .scale(&rat(cs))
            .add(&Elem::generator(&ctx(), 1).scale(&rat(ct)))
    }

    fn unit_matrix(rows: [[Elem; 3]; 3]) -> SuperMatrix<Rational> {
        SuperMatrix::new(rows).unwrap()
    }

    fn unit_m(step: StepBit) -> SuperMatrix<Rational> {
        markov_step_matrix::<Rational>(step).unwrap()
    }

    #[test]
    fn identity_and_reflection() {
        let id = SuperMatrix::<Rational>::identity(&ctx());
        let m = unit_m(StepBit::Zero);
        assert_eq!(id.mul(&m).unwrap(), m);
        let rho = reflection::<Rational>(&ctx());
        assert_eq!(rho.mul(&rho).unwrap(), id);
    }

    #[test]
    fn unit_step_matrices_as_printed() {
        let expect_m0 = unit_matrix([
            [even(0, 0), even(-1, 0), odd(0, 0)],
            [even(1, 0), even(3, 2), odd(0, 1)],
            [odd(0, 0), odd(0, 1), even(1, 0)],
        ]);
        assert_eq!(unit_m(StepBit::Zero), expect_m0);

        let expect_m1 = unit_matrix([
            [even(1, 0), even(1, 0), odd(-1, 0)],
            [even(1, 0), even(2, 1), odd(-1, 1)],
            [odd(0, -1), odd(-1, -1), even(1, -1)],
        ]);
        assert_eq!(unit_m(StepBit::One), expect_m1);
        assert_eq!(unit_m(StepBit::One).entry(0, 2), &odd(-1, 0));

        let expect_fin = unit_matrix([
            [even(1, 0), even(2, 1), odd(-1, 1)],
            [even(-1, 0), even(-1, 0), odd(1, 0)],
            [odd(0, -1), odd(-1, -1), even(1, -1)],
        ]);
        assert_eq!(unit_m(StepBit::Final), expect_fin);
    }

    #[test]
    fn elementary_factors_invert() {
        let h = rat(1);
        let sigma = Elem::generator(&ctx(), 0);
        let a = triangle_matrix(&h, &sigma).unwrap();
        let ai = triangle_matrix_inv(&h, &sigma).unwrap();
        let id = SuperMatrix::<Rational>::identity(&ctx());
        assert_eq!(a.mul(&ai).unwrap(), id);
        assert_eq!(ai.mul(&a).unwrap(), id);
        let e = edge_matrix(&ctx(), &rat(1)).unwrap();
        let ei = edge_matrix_inv(&ctx(), &rat(1)).unwrap();
        assert_eq!(e.mul(&ei).unwrap(), id);
    }

    #[test]
    fn weighted_elementary_factors_invert() {
        let wctx = ctx();
        let lx = LaurentPoly::var("x");
        let ly = LaurentPoly::var("y");
        let lz = LaurentPoly::var("z");
        let h = lx.exact_div(&ly.mul(&lz)).unwrap();
        let theta = WElem::generator(&wctx, 1);
        let a = triangle_matrix(&h, &theta).unwrap();
        let ai = triangle_matrix_inv(&h, &theta).unwrap();
        let id = SuperMatrix::<LaurentPoly>::identity(&wctx);
        assert_eq!(a.mul(&ai).unwrap(), id);
        let e = edge_matrix(&wctx, &lx).unwrap();
        let ei = edge_matrix_inv(&wctx, &lx).unwrap();
        assert_eq!(e.mul(&ei).unwrap(), id);
    }

    #[test]
    fn holonomy_of_one_half() {
        // M_fin · M(0): the displayed matrix for slope 1/2, whose
        // (1,2)-entry is 5 + 6·sigma*theta.
        let h = markov_holonomy::<Rational>(Slope::new(1, 2).unwrap()).unwrap();
        let expect = unit_matrix([
            [even(2, 1), even(5, 6), odd(-1, 3)],
            [even(-1, 0), even(-2, -1), odd(1, -1)],
            [odd(-1, -1), odd(-3, -1), even(1, -2)],
        ]);
        assert_eq!(h, expect);
    }

    #[test]
    fn holonomy_of_one_one_is_the_closing_factor() {
        let h = markov_holonomy::<Rational>(Slope::new(1, 1).unwrap()).unwrap();
        assert_eq!(h, unit_m(StepBit::Final));
    }

    #[test]
    fn sm_values_from_matrices() {
        let sm = |p, q| sm_via_matrix::<Rational>(Slope::new(p, q).unwrap()).unwrap();
        assert_eq!(sm(1, 1), even(2, 1));
        assert_eq!(sm(3, 5), even(433, 2032));
        assert_eq!(sm(1, 4), even(34, 97));
    }

    #[test]
    fn second_row_spot_check_for_two_thirds() {
        // The (2,1)-entry of the 2/3 holonomy is −(5 + 6σθ) = −SM_{1/2}.
        let h = markov_holonomy::<Rational>(Slope::new(2, 3).unwrap()).unwrap();
        assert_eq!(h.entry(1, 0), &even(-5, -6));
        assert_eq!(
            h.entry(1, 0).neg(),
            sm_via_matrix::<Rational>(Slope::new(1, 2).unwrap()).unwrap()
        );
    }

    #[test]
    fn osp_residuals() {
        let id = SuperMatrix::<Rational>::identity(&ctx());
        assert!(osp_check(&id).unwrap().all_zero());

        let h = markov_holonomy::<Rational>(Slope::new(1, 2).unwrap()).unwrap();
        let report = osp_check(&h).unwrap();
        assert!(report.all_zero());
        assert!(report.dual_gap.is_zero());

        // Tampering with the (3,3)-entry breaks the first constraint.
        let mut rows: Vec<Vec<Elem>> = (0..3)
            .map(|r| (0..3).map(|c| h.entry(r, c).clone()).collect())
            .collect();
        rows[2][2] = even(2, 0);
        let tampered = SuperMatrix::new([
            [rows[0][0].clone(), rows[0][1].clone(), rows[0][2].clone()],
            [rows[1][0].clone(), rows[1][1].clone(), rows[1][2].clone()],
            [rows[2][0].clone(), rows[2][1].clone(), rows[2][2].clone()],
        ])
        .unwrap();
        let report = osp_check(&tampered).unwrap();
        assert!(!report.residuals[0].is_zero());
    }

    #[test]
    fn parity_violations_are_rejected() {
        let bad = SuperMatrix::new([
            [even(1, 0), even(0, 0), even(1, 0)],
            [even(0, 0), even(1, 0), odd(0, 0)],
            [odd(0, 0), odd(0, 0), even(1, 0)],
        ]);
        assert!(matches!(
            bad,
            Err(Error::ParityViolation { row: 0, col: 2 })
        ));
    }

    #[test]
    fn weighted_closing_factor_entries() {
        let mf = markov_step_matrix::<LaurentPoly>(StepBit::Final).unwrap();
        // (1,1) = y/x
        let y_over_x = WElem::from_scalar(&ctx(), LaurentPoly::monomial(rat(1), &[("y", 2), ("x", -2)]));
        assert_eq!(mf.entry(0, 0), &y_over_x);
        // (1,2) = (x² + y²)/z + (xy/z)·sigma*theta
        let body = LaurentPoly::monomial(rat(1), &[("x", 4), ("z", -2)])
            .add(&LaurentPoly::monomial(rat(1), &[("y", 4), ("z", -2)]));
        let soul = LaurentPoly::monomial(rat(1), &[("x", 2), ("y", 2), ("z", -2)]);
        let expect = WElem::from_scalar(&ctx(), body)
            .add(&GrassmannElement::<LaurentPoly>::sigma_theta().scale(&soul));
        assert_eq!(mf.entry(0, 1), &expect);
    }

    fn arb_super_matrix() -> impl Strategy<Value = SuperMatrix<Rational>> {
        proptest::collection::vec(-5i64..=5, 18).prop_map(|v| {
            let e = |b: i64, s: i64| even(b, s);
            let o = |cs: i64, ct: i64| odd(cs, ct);
            SuperMatrix::new([
                [e(v[0], v[1]), e(v[2], v[3]), o(v[4], v[5])],
                [e(v[6], v[7]), e(v[8], v[9]), o(v[10], v[11])],
                [o(v[12], v[13]), o(v[14], v[15]), e(v[16], v[17])],
            ])
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn products_preserve_parity(a in arb_super_matrix(), b in arb_super_matrix()) {
            // mul re-validates the pattern internally; it must never fail.
            prop_assert!(a.mul(&b).is_ok());
        }

        #[test]
        fn products_associate(a in arb_super_matrix(), b in arb_super_matrix(), c in arb_super_matrix()) {
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
