//! Analytic Jacobians between primitive, conservative and entropy variables.
//!
//! Variable ordering everywhere is `(ρ, v, B, p)`, `(D, m, B, E)` and `W₁..W₈`.

use nalgebra::Matrix3;

use super::{Eos, Mat8, PrimState, Vec3};

#[inline]
fn put_block(m: &mut Mat8, r: usize, c: usize, block: &Matrix3<f64>) {
    m.fixed_view_mut::<3, 3>(r, c).copy_from(block);
}

#[inline]
fn put_col(m: &mut Mat8, r: usize, c: usize, v: &Vec3) {
    m.fixed_view_mut::<3, 1>(r, c).copy_from(v);
}

#[inline]
fn put_row(m: &mut Mat8, r: usize, c: usize, v: &Vec3) {
    m.fixed_view_mut::<1, 3>(r, c).copy_from(&v.transpose());
}

/// `∂U/∂V`
pub fn jac_du_dv(s: &PrimState, eos: &Eos) -> Mat8 {
    let gamma = s.lorentz();
    let g2 = gamma * gamma;
    let g4 = g2 * g2;
    let rho_h = s.rho * s.enthalpy(eos);
    let v = &s.v;
    let b = &s.b;
    let b2 = b.norm_squared();
    let v2 = v.norm_squared();
    let vb = v.dot(b);
    let kap = eos.enthalpy_factor();
    let eye = Matrix3::identity();

    let mut j = Mat8::zeros();
    j[(0, 0)] = gamma;
    put_row(&mut j, 0, 1, &(v * (s.rho * gamma * g2)));

    put_col(&mut j, 1, 0, &(v * g2));
    let mm = eye * (rho_h * g2 + b2) - b * b.transpose() + v * v.transpose() * (2.0 * rho_h * g4);
    put_block(&mut j, 1, 1, &mm);
    let mb = -eye * vb + v * b.transpose() * 2.0 - b * v.transpose();
    put_block(&mut j, 1, 4, &mb);
    put_col(&mut j, 1, 7, &(v * (kap * g2)));

    put_block(&mut j, 4, 4, &eye);

    j[(7, 0)] = g2;
    put_row(&mut j, 7, 1, &(v * (2.0 * rho_h * g4 + b2) - b * vb));
    put_row(&mut j, 7, 4, &(b * (1.0 + v2) - v * vb));
    j[(7, 7)] = kap * g2 - 1.0;
    j
}

/// `∂V/∂W`
pub fn jac_dv_dw(s: &PrimState, eos: &Eos) -> Mat8 {
    let gamma = s.lorentz();
    let (rho, p) = (s.rho, s.p);
    let h = s.enthalpy(eos);
    let v = &s.v;
    let b = &s.b;
    let v2 = v.norm_squared();
    let vb = v.dot(b);
    let eye = Matrix3::identity();
    let a = (rho + p / (eos.gamma() - 1.0)) * gamma;
    let c_v = p / (rho * gamma);
    let c_b = p * gamma / rho;

    let mut j = Mat8::zeros();
    j[(0, 0)] = rho;
    put_row(&mut j, 0, 1, &(v * a));
    j[(0, 7)] = a;

    put_block(&mut j, 1, 1, &(eye * c_v));
    put_col(&mut j, 1, 7, &(v * c_v));

    let m5 = b * v.transpose() * 2.0 - eye * vb - v * (b * (1.0 - v2) + v * vb).transpose();
    put_block(&mut j, 4, 1, &(m5 * c_b));
    put_block(&mut j, 4, 4, &((eye - v * v.transpose()) * c_b));
    put_col(&mut j, 4, 7, &((b * (1.0 + v2) - v * (2.0 * vb)) * c_b));

    j[(7, 0)] = p;
    put_row(&mut j, 7, 1, &(v * (p * h * gamma)));
    j[(7, 7)] = p * h * gamma;
    j
}

/// `∂U/∂W = (∂U/∂V)(∂V/∂W)`, the Hessian of `ϕ(W)`. Symmetric positive
/// definite for admissible states up to roundoff in the product.
pub fn jac_du_dw(s: &PrimState, eos: &Eos) -> Mat8 {
    jac_du_dv(s, eos) * jac_dv_dw(s, eos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rest_state_blocks() {
        let eos = Eos::new(5.0 / 3.0).unwrap();
        let s = PrimState::new(1.0, [0.0; 3], [0.0; 3], 1.0).unwrap();
        let j = jac_du_dv(&s, &eos);
        assert_eq!(j[(0, 0)], 1.0);
        for c in 4..7 {
            assert_eq!(j[(c, c)], 1.0);
        }
        // h = 3.5, ρh = 3.5
        assert_eq!(j[(1, 1)], 3.5);
        assert_eq!(j[(7, 7)], 2.5 - 1.0);
        assert_relative_eq!(j.determinant(), 3.5f64.powi(3) * 1.5, max_relative = 1e-14);

        // ∂V/∂W at rest: ρ, p/ρ I, p/ρ I, p h
        let d = jac_dv_dw(&s, &eos);
        assert_eq!(d[(0, 0)], 1.0);
        assert_eq!(d[(0, 7)], 2.5);
        assert_eq!(d[(1, 1)], 1.0);
        assert_eq!(d[(4, 4)], 1.0);
        assert_eq!(d[(7, 0)], 1.0);
        assert_eq!(d[(7, 7)], 3.5);

        // ∂U/∂W at rest with B = 0
        let m = jac_du_dw(&s, &eos);
        let mut expected = Mat8::zeros();
        expected[(0, 0)] = 1.0;
        expected[(0, 7)] = 2.5;
        expected[(7, 0)] = 2.5;
        expected[(7, 7)] = 2.5 + 1.5 * 3.5;
        for c in 1..4 {
            expected[(c, c)] = 3.5;
        }
        for c in 4..7 {
            expected[(c, c)] = 1.0;
        }
        assert_relative_eq!(m, expected, epsilon = 1e-14);
        assert!(m.cholesky().is_some());
    }
}
