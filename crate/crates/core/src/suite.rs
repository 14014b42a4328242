//! Groups of checks as run by the command-line front end.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::flatmodels::{self, build_model, FrameModel, Modification};
use crate::spin_incl::fefferman::{fefferman_check, FeffermanCase};
use crate::{conformal3, exactalg, homology, octonion, spin_incl, tractorpt, CheckReport, Result};

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: usize,
    /// Largest rank used in homology and holonomy sweeps.
    pub max_n: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, trials: 200, max_n: 5 }
    }
}

fn rng(opts: &SuiteOptions, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(opts.seed);
    r.set_stream(stream);
    r
}

pub fn algebra(opts: &SuiteOptions) -> Vec<CheckReport> {
    let mut out: Vec<CheckReport> = (2..=opts.max_n.min(5)).map(exactalg::nilradical_check).collect();
    out.push(exactalg::sl3_distribution_check());
    out
}

pub fn homology(n: usize) -> Vec<CheckReport> {
    let mut out = vec![homology::homology_check(n), homology::torsion_dichotomy_report(n)];
    if n <= 4 {
        for c in [2, 3] {
            out.push(homology::codiff_square_check(n, c));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OctonionPart {
    Table,
    Derivations,
    Classify,
}

pub fn octonion(part: OctonionPart, opts: &SuiteOptions) -> Vec<CheckReport> {
    match part {
        OctonionPart::Table => vec![octonion::table_check(&mut rng(opts, 1))],
        OctonionPart::Derivations => vec![octonion::derivation_check(), spin_incl::theta_stabilizer_check()],
        OctonionPart::Classify => vec![octonion::stabilizer_check(&mut rng(opts, 2), 20)],
    }
}

pub const INCLUSION_CASES: [&str; 7] = ["spinorial", "cr", "lagrangian", "lagrangian-nontransverse", "sl4", "su22", "four-form"];

pub fn inclusions(case: Option<&str>, opts: &SuiteOptions) -> std::result::Result<Vec<CheckReport>, String> {
    let spinorial = || (2..=opts.max_n.min(4)).map(|n| fefferman_check(FeffermanCase::Spinorial(n))).collect::<Vec<_>>();
    Ok(match case {
        None => {
            let mut v = spinorial();
            v.push(fefferman_check(FeffermanCase::Cr));
            v.push(fefferman_check(FeffermanCase::LagrangianTransverse));
            v.push(fefferman_check(FeffermanCase::LagrangianNonTransverse));
            v.extend([spin_incl::sl4_check(), spin_incl::su22_check(), spin_incl::four_form_check()]);
            v
        }
        Some("spinorial") => spinorial(),
        Some("cr") => vec![fefferman_check(FeffermanCase::Cr)],
        Some("lagrangian") => vec![fefferman_check(FeffermanCase::LagrangianTransverse)],
        Some("lagrangian-nontransverse") => vec![fefferman_check(FeffermanCase::LagrangianNonTransverse)],
        Some("sl4") => vec![spin_incl::sl4_check()],
        Some("su22") => vec![spin_incl::su22_check()],
        Some("four-form") => vec![spin_incl::four_form_check()],
        Some(other) => return Err(format!("unknown case '{other}'; expected one of {}", INCLUSION_CASES.join(", "))),
    })
}

/// Frame, normality, curvature shape and holonomy for one model.
pub fn holonomy(model: &FrameModel, opts: &SuiteOptions) -> Vec<CheckReport> {
    let mut out = vec![flatmodels::frame_check(model, opts.seed), flatmodels::normality_check(model)];
    if model.modification != Modification::None {
        out.push(flatmodels::curvature_shape_check(model));
    }
    out.push(flatmodels::holonomy_check(model, None));
    if let Ok(r) = flatmodels::iterated_derivative_leading_terms(model) {
        out.push(r);
    }
    out
}

/// The frame models: flat, single Y_{3|4}, saturated n = 4, 5 and summand removal.
pub fn flat_models(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    out.extend(holonomy(&build_model(4, Modification::None)?, opts));
    out.extend(holonomy(&build_model(4, Modification::SingleY34)?, opts));
    for n in 4..=opts.max_n.clamp(4, 5) {
        out.extend(holonomy(&build_model(n, Modification::saturated(n))?, opts));
    }
    if opts.max_n >= 5 {
        let drops = vec![vec![0], vec![1], vec![2], vec![3], vec![4], vec![5], vec![6], vec![1, 4], vec![2, 3, 6], vec![0, 1, 2, 3, 4, 5, 6]];
        out.push(flatmodels::removal_check(5, &drops));
    } else {
        out.push(flatmodels::removal_check(4, &[vec![0], vec![1], vec![2], vec![0, 2]]));
    }
    Ok(out)
}

pub fn conformal(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    conformal3::conformal3_checks(opts.trials, opts.seed)
}

pub fn tractor(opts: &SuiteOptions) -> Vec<CheckReport> {
    tractorpt::tractor_checks(&mut rng(opts, 3), 3, opts.trials)
}

pub fn properties(opts: &SuiteOptions) -> Vec<CheckReport> {
    let mut r = rng(opts, 4);
    let mut out = Vec::new();
    for n in 2..=4 {
        out.push(exactalg::jacobi_check(&mut r, n, opts.trials));
        out.push(exactalg::grade_additivity_check(&mut r, n, opts.trials));
    }
    out.push(octonion::norm_multiplicativity_check(&mut r, opts.trials));
    out.push(octonion::alternator_check(&mut r, opts.trials));
    out
}

/// Every check, ordered by id.
pub fn verify_all(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut out = algebra(opts);
    for n in 2..=opts.max_n {
        out.extend(homology(n));
    }
    for part in [OctonionPart::Table, OctonionPart::Derivations, OctonionPart::Classify] {
        out.extend(octonion(part, opts));
    }
    out.extend(inclusions(None, opts).expect("all cases known"));
    out.extend(flat_models(opts)?);
    out.extend(conformal(opts)?);
    out.extend(tractor(opts));
    out.extend(properties(opts));
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}
