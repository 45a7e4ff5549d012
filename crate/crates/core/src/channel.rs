//! Kraus channels and their Choi states.

use crate::error::{Error, Result};
use crate::gates;
use crate::operator::{Operator, C64, ZERO};
use crate::state::DensityOperator;
use crate::tolerance::Tolerances;

/// A linear map `ρ ↦ Σ K_i ρ K_i†` with every `K_i` of shape `d_out × d_in`.
///
/// Construction only checks shapes. Completeness is measured once and can be
/// enforced with [`KrausChannel::validate`]; incomplete sets are still useful
/// for reporting (e.g. a misprinted Kraus set).
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kraus: Vec<Operator>,
    d_in: usize,
    d_out: usize,
    completeness_deviation: f64,
}

impl KrausChannel {
    pub fn new(kraus: Vec<Operator>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        for k in &kraus {
            if k.rows() != d_out || k.cols() != d_in {
                return Err(Error::dims(
                    "KrausChannel::new",
                    format!("{d_out}x{d_in}"),
                    format!("{}x{}", k.rows(), k.cols()),
                ));
            }
        }
        let sum = kraus.iter().fold(Operator::zeros(d_in, d_in), |acc, k| {
            &acc + &k.dagger().matmul(k)
        });
        let completeness_deviation = sum.max_abs_diff(&Operator::identity(d_in));
        Ok(Self {
            kraus,
            d_in,
            d_out,
            completeness_deviation,
        })
    }

    /// [`KrausChannel::new`] followed by [`KrausChannel::validate`].
    pub fn new_complete(kraus: Vec<Operator>) -> Result<Self> {
        let ch = Self::new(kraus)?;
        ch.validate()?;
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self::unitary(Operator::identity(d)).expect("identity is unitary")
    }

    pub fn unitary(u: Operator) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::dims(
                "unitary channel",
                "square",
                format!("{}x{}", u.rows(), u.cols()),
            ));
        }
        Self::new_complete(vec![u])
    }

    /// `D_p(ρ) = p·tr(ρ)·I/d + (1 − p)ρ`, valid (completely positive) for
    /// `0 ≤ p ≤ d²/(d²−1)`.
    ///
    /// Kraus operators are `√(1 − p(d²−1)/d²)·I` and `(√p/d)·U_i` for the
    /// non-identity members of [`gates::unitary_basis`].
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        let d2 = (d * d) as f64;
        let p_max = d2 / (d2 - 1.0);
        if d < 2 || !(0.0..=p_max + 1e-12).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "depolarizing strength {p} outside [0, {p_max}] for d = {d}"
            )));
        }
        let w0 = (1.0 - p * (d2 - 1.0) / d2).max(0.0).sqrt();
        let wi = p.sqrt() / d as f64;
        let basis = gates::unitary_basis(d);
        let mut kraus = Vec::with_capacity(basis.len());
        kraus.push(basis[0].scale_real(w0));
        kraus.extend(basis[1..].iter().map(|u| u.scale_real(wi)));
        Self::new_complete(kraus)
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn completeness_deviation(&self) -> f64 {
        self.completeness_deviation
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_deviation <= Tolerances::DEFAULT.completeness
    }

    /// Enforces `Σ K†K = I` within the completeness tolerance.
    pub fn validate(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::IncompleteChannel {
                deviation: self.completeness_deviation,
            })
        }
    }

    /// Applies the map to an arbitrary `d_in × d_in` operator.
    pub fn apply_operator(&self, x: &Operator) -> Result<Operator> {
        if x.rows() != self.d_in || x.cols() != self.d_in {
            return Err(Error::dims(
                "apply_channel",
                format!("{0}x{0}", self.d_in),
                format!("{}x{}", x.rows(), x.cols()),
            ));
        }
        Ok(self
            .kraus
            .iter()
            .fold(Operator::zeros(self.d_out, self.d_out), |acc, k| {
                &acc + &k.conjugate(x)
            }))
    }

    /// `Σ K_i ρ K_i†`. The output is flagged normalized when the input was
    /// and the Kraus set is complete.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let out = self.apply_operator(rho.op())?;
        Ok(DensityOperator::from_trusted(
            out,
            rho.is_normalized() && self.is_complete(),
        ))
    }

    /// `self ∘ inner`: `inner` acts first.
    pub fn compose(&self, inner: &KrausChannel) -> Result<KrausChannel> {
        if inner.d_out != self.d_in {
            return Err(Error::dims("compose", self.d_in, inner.d_out));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for a in &self.kraus {
            for b in &inner.kraus {
                kraus.push(a.matmul(b));
            }
        }
        KrausChannel::new(kraus)
    }

    /// Choi state `(1/d_in) Σ_{ij} |i⟩⟨j| ⊗ N(|i⟩⟨j|)`, reference system first.
    pub fn choi(&self) -> Result<ChoiState> {
        self.validate()?;
        let d_in = self.d_in;
        let mut j = Operator::zeros(d_in * self.d_out, d_in * self.d_out);
        for a in 0..d_in {
            for b in 0..d_in {
                let eij = Operator::ket_bra(d_in, a, b);
                let image = self.apply_operator(&eij)?;
                j = &j + &eij.tensor(&image);
            }
        }
        ChoiState::new(j.scale_real(1.0 / d_in as f64), d_in, self.d_out)
    }
}

/// `(1/d_in) Σ_{ij} |i⟩⟨j| ⊗ N(|i⟩⟨j|)` for a CPTP map `N`.
#[derive(Clone, Debug)]
pub struct ChoiState {
    op: Operator,
    d_in: usize,
    d_out: usize,
}

impl ChoiState {
    /// Checks positivity and the marginal `Tr_out J = I/d_in`.
    pub fn new(op: Operator, d_in: usize, d_out: usize) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        if !op.is_square() || op.rows() != d_in * d_out {
            return Err(Error::dims("ChoiState", d_in * d_out, op.rows()));
        }
        let evs = op.hermitian_eigenvalues(tol.psd)?;
        if evs[0] < -tol.psd {
            return Err(Error::NotPositive {
                min_eigenvalue: evs[0],
            });
        }
        let marginal = op.partial_trace(&[d_in, d_out], &[0])?;
        let target = Operator::identity(d_in).scale_real(1.0 / d_in as f64);
        let deviation = marginal.max_abs_diff(&target);
        if deviation > tol.psd {
            return Err(Error::InvalidChoi { deviation });
        }
        Ok(Self { op, d_in, d_out })
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Recovers a Kraus representation from the eigendecomposition of `J`.
    /// Eigenvalues below the PSD tolerance are dropped.
    pub fn to_channel(&self) -> Result<KrausChannel> {
        let tol = Tolerances::DEFAULT.psd;
        let (vals, vecs) = self.op.hermitian_eigen(tol)?;
        let mut kraus = Vec::new();
        for (k, &lambda) in vals.iter().enumerate() {
            if lambda <= tol {
                continue;
            }
            let w = (lambda * self.d_in as f64).sqrt();
            let v = vecs.column(k);
            // |κ⟩ = Σ_i |i⟩ ⊗ K|i⟩, so K[o][i] = κ[i·d_out + o]
            kraus.push(Operator::from_fn(self.d_out, self.d_in, |o, i| {
                v[i * self.d_out + o] * w
            }));
        }
        if kraus.is_empty() {
            kraus.push(Operator::from_fn(self.d_out, self.d_in, |_, _| ZERO));
        }
        KrausChannel::new(kraus)
    }
}

/// A map scaled by a non-negative weight, e.g. one branch of a measured
/// switch: `weight · channel(·)` with `channel` trace preserving.
#[derive(Clone, Debug)]
pub struct WeightedChannel {
    pub weight: f64,
    pub channel: KrausChannel,
}

impl WeightedChannel {
    pub fn apply_operator(&self, x: &Operator) -> Result<Operator> {
        Ok(self
            .channel
            .apply_operator(x)?
            .scale(C64::new(self.weight, 0.0)))
    }
}
