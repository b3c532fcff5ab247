//! Report documents and their serializations. All rational values render
//! as exact "p/q" strings, polynomials as ordered coefficient arrays, so
//! identical jobs produce byte-identical JSON.

use crate::checks::{IsolatedVerdict, RegularSequenceVerdict, RingCertificate};
use crate::field::render_rational;
use crate::invariants::{EtaReport, EulerCheck, GenFunReport, HilbertSeries, KoszulResidualReport};
use crate::ratpoly::RatPoly;
use crate::tor::{AmbientVanishing, RigidityFindings, SymmetryReport, TorTable};
use serde::Serialize;

fn poly_doc(p: &RatPoly) -> Vec<String> {
    p.render()
}

#[derive(Clone, Debug, Serialize)]
pub struct RingDoc {
    pub field: String,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub relation_degrees: Vec<usize>,
    pub codim: usize,
    pub num_vars: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleDoc {
    pub name: String,
    pub gens: Vec<usize>,
    pub relations: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsDoc {
    pub j: usize,
    pub d: usize,
    pub window: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateDoc {
    pub regular_sequence: String,
    pub regular_sequence_degree: usize,
    pub isolated_singularity: String,
    pub isolated_singularity_degree: Option<usize>,
    pub degree_product: u64,
    pub codim: usize,
    pub num_vars: usize,
    pub warnings: Vec<String>,
}

impl CertificateDoc {
    pub fn from(cert: &RingCertificate) -> Self {
        let (rs, rsd) = match cert.regular_sequence {
            RegularSequenceVerdict::VerifiedToDegree(d) => ("verified".to_string(), d),
            RegularSequenceVerdict::FailedAtDegree(d) => ("failed".to_string(), d),
        };
        let (iso, isod) = match cert.isolated_singularity {
            IsolatedVerdict::Yes { from_degree } => ("yes".to_string(), Some(from_degree)),
            IsolatedVerdict::NoWithinBound { bound } => {
                ("no-within-bound".to_string(), Some(bound))
            }
            IsolatedVerdict::Skipped => ("skipped".to_string(), None),
        };
        CertificateDoc {
            regular_sequence: rs,
            regular_sequence_degree: rsd,
            isolated_singularity: iso,
            isolated_singularity_degree: isod,
            degree_product: cert.degree_product,
            codim: cert.codim,
            num_vars: cert.num_vars,
            warnings: cert.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertDoc {
    pub module: String,
    pub coeffs: Vec<usize>,
    pub numerator: Vec<String>,
    pub pole_order: usize,
}

impl HilbertDoc {
    pub fn from(name: &str, h: &HilbertSeries) -> Self {
        HilbertDoc {
            module: name.to_string(),
            coeffs: h.coeffs.clone(),
            numerator: poly_doc(&h.numerator),
            pole_order: h.pole_order,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TorDoc {
    pub m: String,
    pub n: String,
    pub j_max: usize,
    pub d_max: usize,
    pub window: usize,
    pub dims: Vec<Vec<usize>>,
    pub lengths: Vec<Option<usize>>,
    pub finite_length_from: Option<usize>,
    pub stabilization_onset: Option<usize>,
}

impl TorDoc {
    pub fn from(t: &TorTable) -> Self {
        TorDoc {
            m: t.m_label.clone(),
            n: t.n_label.clone(),
            j_max: t.j_max,
            d_max: t.d_max,
            window: t.window,
            dims: t.dims.clone(),
            lengths: t.lengths.clone(),
            finite_length_from: t.finite_length_from,
            stabilization_onset: t.stabilization_onset,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FitDoc {
    pub p_even: Vec<String>,
    pub p_odd: Vec<String>,
    pub window: (usize, usize),
    pub verified_points: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaDoc {
    pub c: usize,
    pub eta: String,
    pub theta: Option<String>,
    pub limit_estimates: Vec<(usize, String)>,
    pub fit: FitDoc,
}

impl EtaDoc {
    pub fn from(r: &EtaReport) -> Self {
        EtaDoc {
            c: r.c,
            eta: render_rational(&r.eta),
            theta: r.theta.as_ref().map(render_rational),
            limit_estimates: r
                .limit_estimates
                .iter()
                .map(|(n, q)| (*n, render_rational(q)))
                .collect(),
            fit: FitDoc {
                p_even: poly_doc(&r.fit.even),
                p_odd: poly_doc(&r.fit.odd),
                window: r.fit.window,
                verified_points: r.fit.verified_points,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GenFunDoc {
    pub start: usize,
    pub c: usize,
    pub b_even: Vec<Vec<String>>,
    pub b_odd: Vec<Vec<String>>,
    pub eta_poly: Vec<String>,
    pub eta_poly_is_zero: bool,
    pub value_at_one: String,
    pub vanishing_order: Option<usize>,
    pub symmetric: Vec<Vec<String>>,
    pub x_degree_checked_to: usize,
}

impl GenFunDoc {
    pub fn from(r: &GenFunReport) -> Self {
        GenFunDoc {
            start: r.start,
            c: r.c,
            b_even: r.b_even.iter().map(poly_doc).collect(),
            b_odd: r.b_odd.iter().map(poly_doc).collect(),
            eta_poly: poly_doc(&r.eta_poly),
            eta_poly_is_zero: r.eta_poly.is_zero(),
            value_at_one: render_rational(&r.value_at_one),
            vanishing_order: r.vanishing_order,
            symmetric: r.symmetric.iter().map(poly_doc).collect(),
            x_degree_checked_to: r.x_degree_checked_to,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualDoc {
    pub onset: Option<usize>,
    /// Residual polynomials that are nonzero, by homological index.
    pub nonzero: Vec<(usize, Vec<String>)>,
}

impl ResidualDoc {
    pub fn from(r: &KoszulResidualReport) -> Self {
        ResidualDoc {
            onset: r.onset,
            nonzero: r
                .residuals
                .iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(j, p)| (*j, poly_doc(p)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerDoc {
    pub max_deviation: String,
    pub location: Option<usize>,
    pub compared_to_degree: usize,
}

impl EulerDoc {
    pub fn from(e: &EulerCheck) -> Self {
        EulerDoc {
            max_deviation: render_rational(&e.max_deviation),
            location: e.location,
            compared_to_degree: e.compared_to_degree,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityDoc {
    pub c: usize,
    pub windows: Vec<RigidityWindowDoc>,
    pub violation: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityWindowDoc {
    pub start: usize,
    pub len: usize,
    pub violation_witness: Option<usize>,
}

impl RigidityDoc {
    pub fn from(c: usize, f: &RigidityFindings) -> Self {
        RigidityDoc {
            c,
            windows: f
                .windows
                .iter()
                .map(|w| RigidityWindowDoc {
                    start: w.start,
                    len: w.len,
                    violation_witness: w.violation_witness,
                })
                .collect(),
            violation: f.has_violation(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AmbientDoc {
    pub max_nonzero_j: Option<usize>,
    pub resolution_length: usize,
    pub variable_bound: usize,
    pub degree_bound: usize,
}

impl AmbientDoc {
    pub fn from(a: &AmbientVanishing) -> Self {
        AmbientDoc {
            max_nonzero_j: a.max_nonzero_j,
            resolution_length: a.resolution_length,
            variable_bound: a.variable_bound,
            degree_bound: a.degree_bound,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryDoc {
    pub agree: bool,
    pub max_deviation: Option<(usize, usize, usize, usize)>,
}

impl SymmetryDoc {
    pub fn from(s: &SymmetryReport) -> Self {
        SymmetryDoc {
            agree: s.agree,
            max_deviation: s.max_deviation,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorDoc {
    pub kind: String,
    pub message: String,
}

/// The full report document. Sections are filled according to the task.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDoc {
    pub task: String,
    pub backend: String,
    pub ring: RingDoc,
    pub bounds: BoundsDoc,
    pub modules: Vec<ModuleDoc>,
    pub pair: Option<[String; 2]>,
    pub certificate: Option<CertificateDoc>,
    pub hilbert: Option<Vec<HilbertDoc>>,
    pub tor: Option<TorDoc>,
    pub residual: Option<ResidualDoc>,
    pub eta: Option<EtaDoc>,
    pub genfun: Option<Vec<GenFunDoc>>,
    pub euler: Option<EulerDoc>,
    pub rigidity: Option<RigidityDoc>,
    pub ambient: Option<AmbientDoc>,
    pub symmetry: Option<SymmetryDoc>,
    pub errors: Vec<ErrorDoc>,
    pub warnings: Vec<String>,
}

impl ReportDoc {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    /// CSV of the Tor table: header row of internal degrees, one row per
    /// homological degree.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(tor) = &self.tor {
            out.push_str("j\\i");
            for i in 0..=tor.d_max {
                out.push_str(&format!(",{i}"));
            }
            out.push('\n');
            for (j, row) in tor.dims.iter().enumerate() {
                out.push_str(&j.to_string());
                for v in row {
                    out.push_str(&format!(",{v}"));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "task {} over {} (J={}, D={})\n",
            self.task, self.backend, self.bounds.j, self.bounds.d
        ));
        if let Some(cert) = &self.certificate {
            out.push_str(&format!(
                "ring: regular sequence {} (degree {}), isolated singularity {}\n",
                cert.regular_sequence, cert.regular_sequence_degree, cert.isolated_singularity
            ));
        }
        if let Some(tor) = &self.tor {
            out.push_str(&format!(
                "tor table {} x {}: lengths {:?}, finite from {:?}, onset {:?}\n",
                tor.m, tor.n, tor.lengths, tor.finite_length_from, tor.stabilization_onset
            ));
        }
        if let Some(eta) = &self.eta {
            out.push_str(&format!("eta_{} = {}", eta.c, eta.eta));
            if let Some(theta) = &eta.theta {
                out.push_str(&format!(" (theta = {theta})"));
            }
            out.push('\n');
        }
        if let Some(gf) = &self.genfun {
            for g in gf {
                out.push_str(&format!(
                    "eta_{{c,{}}}(1) = {}, vanishing order {}\n",
                    g.start,
                    g.value_at_one,
                    match g.vanishing_order {
                        Some(k) => k.to_string(),
                        None => "infinite (zero polynomial)".to_string(),
                    }
                ));
            }
        }
        if let Some(euler) = &self.euler {
            out.push_str(&format!(
                "euler identity deviation {} through degree {}\n",
                euler.max_deviation, euler.compared_to_degree
            ));
        }
        if let Some(r) = &self.rigidity {
            out.push_str(&format!(
                "rigidity windows: {}, violation witness: {}\n",
                r.windows.len(),
                r.violation
            ));
        }
        for e in &self.errors {
            out.push_str(&format!("error [{}]: {}\n", e.kind, e.message));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}
