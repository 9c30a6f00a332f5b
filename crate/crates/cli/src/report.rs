use serde::Serialize;

use cubic_codes::canonical::{canonical_em_form, HypothesisClass};
use cubic_codes::cubic::Census;
use cubic_codes::involutions::{
    involution_dim5, involution_dim_e2, involution_distinct_dim4, involution_nondistinct_dim4,
    verify_automorphism, InvolutionOutcome,
};
use cubic_codes::paut::{paut_with, PautOptions, PautResult};
use cubic_codes::permgroup::StructureLabel;
use cubic_codes::sigma::{huffman_decompose, is_sigma_invariant, orbit_weight_classify, OrbitWeightClass};
use cubic_codes::{Error, LinearCode};

#[derive(Serialize)]
pub struct CodeIdentity {
    pub n: usize,
    pub k: usize,
    pub hash: String,
}

impl CodeIdentity {
    pub fn of(c: &LinearCode) -> Self {
        CodeIdentity { n: c.len(), k: c.dim(), hash: c.fingerprint_hex() }
    }
}

#[derive(Serialize)]
pub struct PautReport {
    pub order: String,
    pub generators: Vec<String>,
    pub fingerprint: StructureLabel,
    pub elapsed_ms: u128,
    pub exact: bool,
}

impl PautReport {
    pub fn from_result(r: &PautResult) -> Self {
        PautReport {
            order: r.order().to_string(),
            generators: r.group.generators().iter().map(ToString::to_string).collect(),
            fingerprint: r.group.fingerprint(),
            elapsed_ms: r.elapsed.as_millis(),
            exact: r.exact,
        }
    }
}

#[derive(Serialize)]
pub struct SubcodeReport {
    pub dim: usize,
    pub rows: Vec<String>,
}

impl SubcodeReport {
    pub fn of(c: &LinearCode) -> Self {
        SubcodeReport { dim: c.dim(), rows: c.generator().rows().iter().map(|r| r.grouped(3)).collect() }
    }
}

#[derive(Serialize)]
pub struct DecomposeReport {
    pub code: CodeIdentity,
    pub fixed: SubcodeReport,
    pub even: SubcodeReport,
    pub orbit_class: OrbitWeightClass,
    pub orbits: usize,
}

pub fn decompose(c: &LinearCode) -> Result<DecomposeReport, Error> {
    let d = huffman_decompose(c)?;
    let o = orbit_weight_classify(c)?;
    Ok(DecomposeReport {
        code: CodeIdentity::of(c),
        fixed: SubcodeReport::of(&d.fixed),
        even: SubcodeReport::of(&d.even),
        orbit_class: o.class,
        orbits: o.orbits.len(),
    })
}

#[derive(Serialize)]
pub struct CanonicalReport {
    pub k: usize,
    pub m: usize,
    pub gamma: String,
    pub hypothesis: HypothesisClass,
    pub grid: Vec<String>,
    pub matrix: Vec<String>,
}

pub fn canonical(c: &LinearCode) -> Result<CanonicalReport, Error> {
    let em = canonical_em_form(c)?;
    Ok(CanonicalReport {
        k: em.k(),
        m: em.m(),
        gamma: em.gamma().to_string(),
        hypothesis: em.hypothesis_class(),
        grid: em.render_grid().lines().map(str::to_string).collect(),
        matrix: em.matrix().rows().iter().map(|r| r.grouped(3)).collect(),
    })
}

#[derive(Serialize)]
pub struct InvolutionEntry {
    pub recipe: &'static str,
    #[serde(flatten)]
    pub outcome: InvolutionOutcome,
    /// Present when a permutation was produced.
    pub automorphism: Option<bool>,
}

#[derive(Serialize)]
pub struct HypothesisAEntry {
    pub permutation: String,
    pub automorphism: bool,
}

#[derive(Serialize)]
pub struct InvolutionsReport {
    pub entries: Vec<InvolutionEntry>,
    /// Only when the canonical form satisfies Hypothesis A.
    pub hypothesis_a: Option<HypothesisAEntry>,
}

pub fn involutions(c: &LinearCode) -> Result<InvolutionsReport, Error> {
    type Recipe = fn(&LinearCode) -> Result<InvolutionOutcome, Error>;
    let recipes: [(&'static str, Recipe); 4] = [
        ("even-dim-2", involution_dim_e2),
        ("nondistinct-dim-4", involution_nondistinct_dim4),
        ("distinct-dim-4", involution_distinct_dim4),
        ("dim-5", involution_dim5),
    ];
    let mut entries = Vec::new();
    for (recipe, f) in recipes {
        let outcome = f(c)?;
        let automorphism = outcome.permutation().map(|p| verify_automorphism(c, p)).transpose()?;
        entries.push(InvolutionEntry { recipe, outcome, automorphism });
    }
    let em = canonical_em_form(c)?;
    let hypothesis_a = match em.hypothesis_class() {
        HypothesisClass::A if em.k() > 0 => {
            let ab = em.to_original(&em.involution_hypothesis_a()?);
            Some(HypothesisAEntry { automorphism: verify_automorphism(c, &ab)?, permutation: ab.to_string() })
        }
        _ => None,
    };
    Ok(InvolutionsReport { entries, hypothesis_a })
}

/// A pipeline stage either produced its value or reports why it stopped.
#[derive(Serialize)]
#[serde(untagged)]
pub enum Stage<T> {
    Done(T),
    Failed { error: String },
}

impl<T> Stage<T> {
    fn from(r: Result<T, Error>) -> Self {
        match r {
            Ok(v) => Stage::Done(v),
            Err(e) => Stage::Failed { error: e.to_string() },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Stage::Done(v) => Some(v),
            Stage::Failed { .. } => None,
        }
    }
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub code: CodeIdentity,
    pub sigma_invariant: bool,
    pub self_dual: bool,
    pub self_orthogonal: bool,
    pub decomposition: Stage<DecomposeReport>,
    pub canonical: Stage<CanonicalReport>,
    pub involutions: Stage<InvolutionsReport>,
    pub paut: Stage<PautReport>,
}

pub fn analyze(c: &LinearCode, opts: &PautOptions) -> Result<AnalysisReport, Error> {
    let sigma_invariant = c.len().is_multiple_of(3) && is_sigma_invariant(c)?;
    let need_sigma = || -> Result<(), Error> {
        if sigma_invariant {
            Ok(())
        } else if !c.len().is_multiple_of(3) {
            Err(Error::LengthNotMultipleOfThree(c.len()))
        } else {
            Err(Error::NotSigmaInvariant)
        }
    };
    Ok(AnalysisReport {
        code: CodeIdentity::of(c),
        sigma_invariant,
        self_dual: c.is_self_dual(),
        self_orthogonal: c.is_self_orthogonal(),
        decomposition: Stage::from(need_sigma().and_then(|_| decompose(c))),
        canonical: Stage::from(need_sigma().and_then(|_| canonical(c))),
        involutions: Stage::from(need_sigma().and_then(|_| involutions(c))),
        paut: Stage::from(paut_with(c, opts).map(|r| PautReport::from_result(&r))),
    })
}

#[derive(Serialize)]
pub struct CensusClassRow {
    pub class_id: usize,
    pub representative: String,
    pub members: u64,
    pub paut_order: String,
    pub fingerprint: String,
    pub exact: bool,
}

#[derive(Serialize)]
pub struct CensusReport {
    pub length: usize,
    pub dim: usize,
    pub codes: u64,
    pub classes: usize,
    pub min_order: Option<String>,
    pub min_fingerprints: Vec<String>,
    pub exact: bool,
    pub elapsed_ms: u128,
    pub rows: Vec<CensusClassRow>,
}

/// Generator rows as hex, coordinate 1 in the top bit of the first digit,
/// zero-padded to a whole digit; rows joined with `:`.
pub fn hex_rows(c: &LinearCode) -> String {
    let n = c.len();
    c.generator()
        .rows()
        .iter()
        .map(|r| {
            (0..n.div_ceil(4))
                .map(|d| {
                    let nib = (0..4).fold(0u32, |acc, b| {
                        let i = 4 * d + b;
                        acc << 1 | (i < n && r.get(i)) as u32
                    });
                    char::from_digit(nib, 16).expect("nibble")
                })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(":")
}

pub fn census(length: usize, dim: usize, c: &Census) -> CensusReport {
    CensusReport {
        length,
        dim,
        codes: c.codes,
        classes: c.class_count(),
        min_order: c.min_order().map(|o| o.to_string()),
        min_fingerprints: c.min_fingerprints().iter().map(ToString::to_string).collect(),
        exact: c.exact(),
        elapsed_ms: c.elapsed.as_millis(),
        rows: c
            .classes
            .iter()
            .enumerate()
            .map(|(i, cl)| CensusClassRow {
                class_id: i + 1,
                representative: hex_rows(&cl.representative),
                members: cl.members,
                paut_order: cl.paut_order.to_string(),
                fingerprint: cl.fingerprint.to_string(),
                exact: cl.exact,
            })
            .collect(),
    }
}
