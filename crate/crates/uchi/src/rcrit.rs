//! The closed-form simplicity criterion: symbolic factorization of the
//! decisive product, its evaluation, the full and Levi Rudakov scalars, and
//! the nonzero-on-coroots sufficient condition.

use serde::Serialize;

use crate::envalg::{AlgebraContext, Character};
use crate::err::{Error, Result};
use crate::gf::{FiniteField, Fq};
use crate::modrep::{self, OracleOpts, Weight};
use crate::roots::{ParabolicData, RootSystem};

/// One factor ((lambda+rho)(h_alpha))^(p-1) - 1, stored as the integer
/// linear form sum k_i x_i + constant so one factorization serves every
/// valid prime.
#[derive(Clone, Debug, Serialize)]
pub struct RFactor {
    pub root: String,
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

impl RFactor {
    /// The linear form (lambda+rho)(h_alpha) reduced into the field.
    pub fn form_at(&self, f: &FiniteField, lambda: &Weight) -> Fq {
        let mut acc = f.from_int(self.constant);
        for (i, &k) in self.coeffs.iter().enumerate() {
            acc = f.add(acc, f.mul(f.from_int(k), lambda.x[i]));
        }
        acc
    }

    /// The factor value form^(p-1) - 1; zero exactly when the form lands in
    /// the multiplicative group of the prime field.
    pub fn value_at(&self, f: &FiniteField, lambda: &Weight) -> Fq {
        f.sub(f.pow(self.form_at(f, lambda), (f.p() - 1) as u64), 1)
    }

    /// The linear form as text, e.g. "x1 + x2 + 2".
    pub fn render_form(&self) -> String {
        let mut parts = Vec::new();
        for (i, &k) in self.coeffs.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("{}*x{}", k, i + 1)),
            }
        }
        if self.constant != 0 || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RFactorization {
    pub factors: Vec<RFactor>,
}

/// One symbolic factor per complement root, in canonical complement order.
pub fn r_factorization(sys: &RootSystem, pd: &ParabolicData) -> Result<RFactorization> {
    let mut factors = Vec::with_capacity(pd.complement.len());
    for alpha in &pd.complement {
        factors.push(RFactor {
            root: alpha.to_string(),
            coeffs: sys.coroot_coeffs(alpha)?.to_vec(),
            constant: sys.rho_pairing(alpha)?,
        });
    }
    Ok(RFactorization { factors })
}

#[derive(Clone, Debug)]
pub struct RVerdict {
    pub simple: bool,
    /// The product over the complement factors, without the undetermined
    /// global constant and without any sign normalization.
    pub r_value: Fq,
    /// Complement roots whose factor vanishes.
    pub vanishing_factors: Vec<String>,
}

/// Evaluates the product criterion at a weight.
pub fn r_product(
    sys: &RootSystem,
    field: &FiniteField,
    pd: &ParabolicData,
    lambda: &Weight,
) -> Result<RVerdict> {
    if lambda.x.len() != sys.rank {
        return Err(Error::config(format!(
            "weight needs {} values, got {}",
            sys.rank,
            lambda.x.len()
        )));
    }
    let fac = r_factorization(sys, pd)?;
    let mut r_value = 1;
    let mut vanishing = Vec::new();
    for factor in &fac.factors {
        let v = factor.value_at(field, lambda);
        if v == 0 {
            vanishing.push(factor.root.clone());
        }
        r_value = field.mul(r_value, v);
    }
    Ok(RVerdict { simple: vanishing.is_empty(), r_value, vanishing_factors: vanishing })
}

/// (-1)^t prod over all of Phi^+ of [(lambda+rho)(h_alpha)^(p-1) - 1].
pub fn full_rudakov(sys: &RootSystem, field: &FiniteField, lambda: &Weight) -> Result<Fq> {
    let mut acc = sign(field, sys.positive_roots.len());
    for alpha in &sys.positive_roots {
        let factor = RFactor {
            root: alpha.to_string(),
            coeffs: sys.coroot_coeffs(alpha)?.to_vec(),
            constant: sys.rho_pairing(alpha)?,
        };
        acc = field.mul(acc, factor.value_at(field, lambda));
    }
    Ok(acc)
}

/// (-1)^s prod over Phi_I^+ of [(lambda+rho_I)(h_alpha)^(p-1) - 1]; the
/// empty parabolic gives 1.
pub fn levi_rudakov(
    sys: &RootSystem,
    field: &FiniteField,
    pd: &ParabolicData,
    lambda: &Weight,
) -> Result<Fq> {
    let mut acc = sign(field, pd.s);
    for alpha in &pd.phi_i_plus {
        let factor = RFactor {
            root: alpha.to_string(),
            coeffs: sys.coroot_coeffs(alpha)?.to_vec(),
            constant: sys.rho_i_pairing(pd, alpha)?,
        };
        acc = field.mul(acc, factor.value_at(field, lambda));
    }
    Ok(acc)
}

fn sign(field: &FiniteField, n: usize) -> Fq {
    if n % 2 == 0 {
        1
    } else {
        field.neg(1)
    }
}

/// True iff chi(h_alpha) != 0 for every complement root; then every
/// compatible weight pairs outside the prime field with every complement
/// coroot, no factor can vanish, and every verdict is simple.
pub fn kw_sufficient(
    sys: &RootSystem,
    field: &FiniteField,
    pd: &ParabolicData,
    chi: &Character,
) -> Result<bool> {
    for alpha in &pd.complement {
        if chi.chi_h_alpha(sys, field, alpha)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The straightening scalar must not change when the nilpotent part of chi
/// is dropped; both runs use the same weight.
pub fn chi_split_consistency(
    sys: &RootSystem,
    field: &FiniteField,
    pd: &ParabolicData,
    chi: &Character,
    lambda: &Weight,
    opts: &OracleOpts,
) -> Result<bool> {
    let ctx_full = AlgebraContext::new(sys, field, chi.clone(), None)?;
    let ctx_semi = AlgebraContext::new(sys, field, chi.semisimple_part(), None)?;
    let r_full = modrep::r_by_straightening(&ctx_full, pd, lambda, opts)?;
    let r_semi = modrep::r_by_straightening(&ctx_semi, pd, lambda, opts)?;
    Ok(r_full == r_semi)
}

/// Measures the undetermined constant of the product formula: sweeps the
/// compatible weights, checks the zero loci of the straightening scalar and
/// the product agree, and checks the ratio is one nonzero constant. Returns
/// None when no compatible weight has a nonzero value.
pub fn measured_constant(
    ctx: &AlgebraContext,
    pd: &ParabolicData,
    opts: &OracleOpts,
) -> Result<Option<Fq>> {
    let f = &ctx.field;
    let mut constant: Option<Fq> = None;
    for lambda in modrep::compatible_weights(ctx) {
        let rs = modrep::r_by_straightening(ctx, pd, &lambda, opts)?;
        if rs >= f.q() {
            return Err(Error::falsified("straightening scalar left the base field"));
        }
        let rp = r_product(&ctx.sys, f, pd, &lambda)?;
        if (rs == 0) != (rp.r_value == 0) {
            return Err(Error::falsified(format!(
                "zero loci disagree at lambda = {}: straightening {}, product {}",
                lambda.describe(f),
                f.render(rs),
                f.render(rp.r_value)
            )));
        }
        if rs == 0 {
            continue;
        }
        let ratio = f.mul(rs, f.inv(rp.r_value)?);
        match constant {
            None => constant = Some(ratio),
            Some(c) if c == ratio => {}
            Some(c) => {
                return Err(Error::falsified(format!(
                    "ratio is not constant: {} then {} at lambda = {}",
                    f.render(c),
                    f.render(ratio),
                    lambda.describe(f)
                )));
            }
        }
    }
    Ok(constant)
}

/// Measures the constant tying the three products together: the criterion
/// product times the Levi scalar against the full scalar, over the given
/// weights. Checks the zero loci agree and the ratio is constant.
pub fn factor_split_constant(
    sys: &RootSystem,
    field: &FiniteField,
    pd: &ParabolicData,
    lambdas: &[Weight],
) -> Result<Option<Fq>> {
    let mut constant: Option<Fq> = None;
    for lambda in lambdas {
        let lhs = field.mul(
            r_product(sys, field, pd, lambda)?.r_value,
            levi_rudakov(sys, field, pd, lambda)?,
        );
        let rhs = full_rudakov(sys, field, lambda)?;
        if (lhs == 0) != (rhs == 0) {
            return Err(Error::falsified(format!(
                "factorization zero loci disagree at lambda = {}",
                lambda.describe(field)
            )));
        }
        if lhs == 0 {
            continue;
        }
        let ratio = field.mul(lhs, field.inv(rhs)?);
        match constant {
            None => constant = Some(ratio),
            Some(c) if c == ratio => {}
            Some(c) => {
                return Err(Error::falsified(format!(
                    "factorization ratio is not constant: {} then {}",
                    field.render(c),
                    field.render(ratio)
                )));
            }
        }
    }
    Ok(constant)
}
