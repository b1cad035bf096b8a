//! Dissipation operators and the entropy-stable interface flux
//! `f*ES = f*EC - 1/2 D H [[v]]`.
//!
//! Every operator is a function of the flux matrix `A` at the interface mean
//! state: a multiple of the identity (LF, LLF, scalar Roe), a linear
//! polynomial `c0 I + c1 A` (HLL, HLLω) or a combination involving `A^2`
//! (LW, HLLXω). Since `A H` is symmetric, `D H` is symmetric too, and it is
//! positive semidefinite as long as the scalar dissipation function `d(λ)` is
//! nonnegative on the spectrum of `A`. The HLL-family coefficients are built so
//! that `d(λ) >= 0` on `[λ_L, λ_R]`.
//!
//! `A` is only ever applied to vectors; no eigenvectors are formed.

use std::fmt;
use std::str::FromStr;

use crate::systems::EquationSystem;
use crate::{Matrix, SolverError, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DissipationKind {
    /// `D = Δx/Δt I`
    LaxFriedrichs,
    /// `D = max(|λ_L|, |λ_R|) I`
    LocalLaxFriedrichs,
    /// `D = a0 I + a1 A`
    Hll,
    /// `D = Δt/Δx A^2`
    LaxWendroff,
    /// `D = b0(ω) I + b1(ω) A`
    HllOmega,
    /// `D = β0 D_LF + β1 D_HLLω + β2 D_LW`
    HllxOmega,
    /// `D = |A| I`, scalar systems only.
    RoeScalar,
}

impl DissipationKind {
    pub const ALL: [DissipationKind; 7] = [
        DissipationKind::LaxFriedrichs,
        DissipationKind::LocalLaxFriedrichs,
        DissipationKind::Hll,
        DissipationKind::LaxWendroff,
        DissipationKind::HllOmega,
        DissipationKind::HllxOmega,
        DissipationKind::RoeScalar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DissipationKind::LaxFriedrichs => "lf",
            DissipationKind::LocalLaxFriedrichs => "llf",
            DissipationKind::Hll => "hll",
            DissipationKind::LaxWendroff => "lw",
            DissipationKind::HllOmega => "hll-omega",
            DissipationKind::HllxOmega => "hllx-omega",
            DissipationKind::RoeScalar => "roe",
        }
    }

    pub fn is_hybrid(self) -> bool {
        matches!(self, DissipationKind::HllOmega | DissipationKind::HllxOmega)
    }

    fn divides_by_gap(self) -> bool {
        matches!(
            self,
            DissipationKind::Hll | DissipationKind::HllOmega | DissipationKind::HllxOmega
        )
    }
}

impl fmt::Display for DissipationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DissipationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        DissipationKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| {
                let names: Vec<_> = DissipationKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown flux `{s}`, expected one of {}", names.join(", "))
            })
    }
}

/// Which jump the dissipation matrix multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JumpForm {
    /// `D H [[v]]`, the form with a discrete entropy inequality.
    #[default]
    EntropyVariables,
    /// `D [[q]]`, kept for comparison runs only.
    Conserved,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationSpec {
    pub kind: DissipationKind,
    omega: f64,
    pub form: JumpForm,
}

impl DissipationSpec {
    pub fn new(kind: DissipationKind, omega: f64) -> Result<Self, SolverError> {
        check_omega(omega)?;
        Ok(Self {
            kind,
            omega,
            form: JumpForm::EntropyVariables,
        })
    }

    /// Non-hybrid operator; `omega` is irrelevant and set to zero.
    pub fn plain(kind: DissipationKind) -> Self {
        Self {
            kind,
            omega: 0.0,
            form: JumpForm::EntropyVariables,
        }
    }

    pub fn with_form(mut self, form: JumpForm) -> Self {
        self.form = form;
        self
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Short label such as `hllx-omega(0.925)` or `llf`.
    pub fn label(&self) -> String {
        if self.kind.is_hybrid() {
            format!("{}({})", self.kind, self.omega)
        } else {
            self.kind.to_string()
        }
    }
}

fn check_omega(omega: f64) -> Result<(), SolverError> {
    if (0.0..=1.0).contains(&omega) {
        Ok(())
    } else {
        Err(SolverError::OmegaOutOfRange(omega))
    }
}

/// Relative gap below which the HLL-family coefficients are not evaluated.
pub fn degenerate_gap_threshold(lambda_l: f64, lambda_r: f64) -> f64 {
    1e-12 * 1f64.max(lambda_l.abs()).max(lambda_r.abs())
}

fn check_gap(lambda_l: f64, lambda_r: f64) -> Result<(), SolverError> {
    // written so that NaN speeds also fail
    if lambda_r - lambda_l >= degenerate_gap_threshold(lambda_l, lambda_r) {
        Ok(())
    } else {
        Err(SolverError::DegenerateWaveSpeeds { lambda_l, lambda_r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HllCoefficients {
    pub a0: f64,
    pub a1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HllOmegaCoefficients {
    pub b0: f64,
    pub b1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HllxOmegaCoefficients {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub alpha: f64,
    pub beta: f64,
}

pub fn coeff_hll(lambda_l: f64, lambda_r: f64) -> Result<HllCoefficients, SolverError> {
    check_gap(lambda_l, lambda_r)?;
    let gap = lambda_r - lambda_l;
    Ok(HllCoefficients {
        a0: (lambda_l.abs() * lambda_r - lambda_r.abs() * lambda_l) / gap,
        a1: (lambda_r.abs() - lambda_l.abs()) / gap,
    })
}

/// Chord of `ω λ^2 + (1-ω)|λ|` over `[λ_L, λ_R]`. At `ω = 0` the arithmetic
/// reduces term by term to [`coeff_hll`], so the two agree bit for bit.
pub fn coeff_hll_omega(
    lambda_l: f64,
    lambda_r: f64,
    omega: f64,
) -> Result<HllOmegaCoefficients, SolverError> {
    check_omega(omega)?;
    check_gap(lambda_l, lambda_r)?;
    let gap = lambda_r - lambda_l;
    let w1 = 1.0 - omega;
    let left = omega * (lambda_l * lambda_l) + w1 * lambda_l.abs();
    let right = omega * (lambda_r * lambda_r) + w1 * lambda_r.abs();
    Ok(HllOmegaCoefficients {
        b0: (lambda_r * left - lambda_l * right) / gap,
        b1: (w1 * (lambda_r.abs() - lambda_l.abs())
            + omega * (lambda_r * lambda_r - lambda_l * lambda_l))
            / gap,
    })
}

pub fn coeff_hllx_omega(
    lambda_l: f64,
    lambda_r: f64,
    omega: f64,
) -> Result<HllxOmegaCoefficients, SolverError> {
    check_omega(omega)?;
    check_gap(lambda_l, lambda_r)?;
    let gap = lambda_r - lambda_l;
    let (abs_l, abs_r) = (lambda_l.abs(), lambda_r.abs());
    let abs_sum = abs_l + abs_r;
    let w1 = 1.0 - omega;
    let alpha = (gap - (abs_r - abs_l).abs()) / (gap * gap);
    let beta = omega + w1 * alpha;
    Ok(HllxOmegaCoefficients {
        beta0: beta * (w1 * (lambda_l * lambda_r).abs()) / (w1 + omega * abs_sum),
        beta1: 1.0 - beta / (w1 / abs_sum + omega),
        beta2: beta,
        alpha,
        beta,
    })
}

/// Everything an interface flux needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceContext<const N: usize> {
    pub q_left: State<N>,
    pub q_right: State<N>,
    /// Arithmetic mean of the primitive variables, in conserved form.
    pub q_mean: State<N>,
    pub lambda_left: f64,
    pub lambda_right: f64,
    pub dt_over_dx: f64,
}

impl<const N: usize> InterfaceContext<N> {
    pub fn new<S: EquationSystem<N>>(
        system: &S,
        q_left: &State<N>,
        q_right: &State<N>,
        dt_over_dx: f64,
    ) -> Result<Self, SolverError> {
        if !(dt_over_dx > 0.0 && dt_over_dx.is_finite()) {
            return Err(SolverError::InvalidConfig(format!(
                "dt/dx must be positive, got {dt_over_dx}"
            )));
        }
        let (lambda_left, lambda_right) = system.wave_speed_estimates(q_left, q_right)?;
        Ok(Self {
            q_left: *q_left,
            q_right: *q_right,
            q_mean: system.mean_state(q_left, q_right)?,
            lambda_left,
            lambda_right,
            dt_over_dx,
        })
    }

    pub fn max_speed(&self) -> f64 {
        self.lambda_left.abs().max(self.lambda_right.abs())
    }

    fn is_degenerate(&self) -> bool {
        check_gap(self.lambda_left, self.lambda_right).is_err()
    }
}

/// The operator `D` for one interface, ready to be applied to vectors.
struct Operator<const N: usize> {
    spec: DissipationSpec,
    jacobian: Option<Matrix<N>>,
    scalar: f64,
    dt_over_dx: f64,
    linear: Option<(f64, f64)>,
    hllx: Option<HllxOmegaCoefficients>,
}

impl<const N: usize> Operator<N> {
    fn build<S: EquationSystem<N>>(
        spec: &DissipationSpec,
        ctx: &InterfaceContext<N>,
        system: &S,
    ) -> Result<Self, SolverError> {
        use DissipationKind::*;
        let mut spec = *spec;
        if spec.kind.divides_by_gap() && ctx.is_degenerate() {
            spec.kind = LocalLaxFriedrichs;
        }
        let (l, r) = (ctx.lambda_left, ctx.lambda_right);
        let mut op = Operator {
            spec,
            jacobian: None,
            scalar: 0.0,
            dt_over_dx: ctx.dt_over_dx,
            linear: None,
            hllx: None,
        };
        match spec.kind {
            LaxFriedrichs => op.scalar = 1.0 / ctx.dt_over_dx,
            LocalLaxFriedrichs => op.scalar = ctx.max_speed(),
            RoeScalar => {
                op.scalar = system
                    .scalar_roe_speed(&ctx.q_left, &ctx.q_right)
                    .ok_or(SolverError::UnsupportedDissipation(
                        "roe",
                        system.descriptor().name,
                    ))?;
            }
            Hll => {
                let c = coeff_hll(l, r)?;
                op.linear = Some((c.a0, c.a1));
            }
            HllOmega => {
                let c = coeff_hll_omega(l, r, spec.omega)?;
                op.linear = Some((c.b0, c.b1));
            }
            LaxWendroff => {}
            HllxOmega => {
                let c = coeff_hll_omega(l, r, spec.omega)?;
                op.linear = Some((c.b0, c.b1));
                op.hllx = Some(coeff_hllx_omega(l, r, spec.omega)?);
            }
        }
        if matches!(spec.kind, Hll | HllOmega | LaxWendroff | HllxOmega) {
            op.jacobian = Some(system.flux_jacobian(&ctx.q_mean)?);
        }
        Ok(op)
    }

    fn apply(&self, x: &State<N>) -> State<N> {
        use DissipationKind::*;
        match self.spec.kind {
            LaxFriedrichs | LocalLaxFriedrichs | RoeScalar => x * self.scalar,
            Hll | HllOmega => self.apply_linear(x),
            LaxWendroff => self.apply_lw(x),
            HllxOmega => {
                let c = self.hllx.expect("hllx coefficients");
                let lf = x * (c.beta0 / self.dt_over_dx);
                lf + self.apply_linear(x) * c.beta1 + self.apply_lw(x) * c.beta2
            }
        }
    }

    fn a(&self) -> &Matrix<N> {
        self.jacobian.as_ref().expect("flux matrix")
    }

    fn apply_linear(&self, x: &State<N>) -> State<N> {
        let (c0, c1) = self.linear.expect("linear coefficients");
        x * c0 + (self.a() * x) * c1
    }

    fn apply_lw(&self, x: &State<N>) -> State<N> {
        let ax = self.a() * x;
        (self.a() * ax) * self.dt_over_dx
    }
}

/// `D` applied to an arbitrary vector.
pub fn apply_operator<S: EquationSystem<N>, const N: usize>(
    spec: &DissipationSpec,
    ctx: &InterfaceContext<N>,
    system: &S,
    x: &State<N>,
) -> Result<State<N>, SolverError> {
    Ok(Operator::build(spec, ctx, system)?.apply(x))
}

/// The dissipation vector `D H [[v]]` (or `D [[q]]` in the conserved form).
/// `H` is evaluated at the mean state.
pub fn apply_dissipation<S: EquationSystem<N>, const N: usize>(
    spec: &DissipationSpec,
    ctx: &InterfaceContext<N>,
    system: &S,
) -> Result<State<N>, SolverError> {
    let x = match spec.form {
        JumpForm::EntropyVariables => {
            let jump_v = entropy_jump(system, &ctx.q_left, &ctx.q_right)?;
            system.apply_entropy_jacobian(&ctx.q_mean, &jump_v)?
        }
        JumpForm::Conserved => ctx.q_right - ctx.q_left,
    };
    apply_operator(spec, ctx, system, &x)
}

fn entropy_jump<S: EquationSystem<N>, const N: usize>(
    system: &S,
    q_left: &State<N>,
    q_right: &State<N>,
) -> Result<State<N>, SolverError> {
    Ok(system.entropy_data(q_right)?.variables - system.entropy_data(q_left)?.variables)
}

/// An interface flux together with the pieces the entropy audit needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceFlux<const N: usize> {
    pub flux: State<N>,
    /// `D H [[v]]`
    pub dissipation: State<N>,
    pub jump_v: State<N>,
    /// Fastest signal speed `max(|λ_L|, |λ_R|)`.
    pub max_speed: f64,
}

impl<const N: usize> InterfaceFlux<N> {
    /// `-1/2 [[v]] . D H [[v]]`, nonpositive for every entropy-stable operator.
    pub fn production(&self) -> f64 {
        -0.5 * self.jump_v.dot(&self.dissipation)
    }

    /// Scale for the production tolerance, `||[[v]]|| ||D H [[v]]||`.
    pub fn production_scale(&self) -> f64 {
        self.jump_v.norm() * self.dissipation.norm()
    }
}

pub fn interface_flux<S: EquationSystem<N>, const N: usize>(
    spec: &DissipationSpec,
    system: &S,
    q_left: &State<N>,
    q_right: &State<N>,
    dt_over_dx: f64,
) -> Result<InterfaceFlux<N>, SolverError> {
    let ctx = InterfaceContext::new(system, q_left, q_right, dt_over_dx)?;
    let dissipation = apply_dissipation(spec, &ctx, system)?;
    let ec = system.ec_flux(q_left, q_right)?;
    Ok(InterfaceFlux {
        flux: ec - dissipation * 0.5,
        dissipation,
        jump_v: entropy_jump(system, q_left, q_right)?,
        max_speed: ctx.max_speed(),
    })
}

/// `f*ES = f*EC - 1/2 D H [[v]]`.
pub fn es_interface_flux<S: EquationSystem<N>, const N: usize>(
    spec: &DissipationSpec,
    q_left: &State<N>,
    q_right: &State<N>,
    dt_over_dx: f64,
    system: &S,
) -> Result<State<N>, SolverError> {
    interface_flux(spec, system, q_left, q_right, dt_over_dx).map(|f| f.flux)
}

/// Scalar dissipation function `d(λ)`: the eigenvalue of `D` belonging to an
/// eigenvalue `λ` of `A`.
pub fn scalar_dissipation(
    spec: &DissipationSpec,
    lambda_l: f64,
    lambda_r: f64,
    dt_over_dx: f64,
    lambda: f64,
) -> Result<f64, SolverError> {
    use DissipationKind::*;
    Ok(match spec.kind {
        LaxFriedrichs => 1.0 / dt_over_dx,
        LocalLaxFriedrichs => lambda_l.abs().max(lambda_r.abs()),
        RoeScalar => lambda.abs(),
        LaxWendroff => dt_over_dx * lambda * lambda,
        Hll => {
            let c = coeff_hll(lambda_l, lambda_r)?;
            c.a0 + c.a1 * lambda
        }
        HllOmega => {
            let c = coeff_hll_omega(lambda_l, lambda_r, spec.omega)?;
            c.b0 + c.b1 * lambda
        }
        HllxOmega => {
            let b = coeff_hll_omega(lambda_l, lambda_r, spec.omega)?;
            let c = coeff_hllx_omega(lambda_l, lambda_r, spec.omega)?;
            c.beta0 / dt_over_dx
                + c.beta1 * (b.b0 + b.b1 * lambda)
                + c.beta2 * dt_over_dx * lambda * lambda
        }
    })
}

/// `d(λ)` on `samples` uniformly spaced points of `[λ_L, λ_R]`.
pub fn scalar_dissipation_curve(
    spec: &DissipationSpec,
    lambda_l: f64,
    lambda_r: f64,
    dt_over_dx: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>, SolverError> {
    check_gap(lambda_l, lambda_r)?;
    if samples < 2 {
        return Err(SolverError::InvalidConfig(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let step = (lambda_r - lambda_l) / (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            let lambda = if i + 1 == samples {
                lambda_r
            } else {
                lambda_l + step * i as f64
            };
            Ok((
                lambda,
                scalar_dissipation(spec, lambda_l, lambda_r, dt_over_dx, lambda)?,
            ))
        })
        .collect()
}
