//! Reference-value regression suite over the bundled fixtures.
//!
//! Every check compares a rendered expected value with the rendered computed
//! value. Fixture text can come from the bundled copies, a directory, or
//! in-memory overrides, so transcription damage shows up as failed rows.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::canonical::{canonical_em_form_from_pairs, CanonicalEM, HypothesisClass};
use crate::cubic::{classify, count_cubic_pairs, enumerate_cubic, ClassifyOptions};
use crate::error::{Error, Result};
use crate::gf2::{parse_code_file, CodeFile, LinearCode};
use crate::involutions::{
    equal_weight_involution, involution_distinct_dim4, involution_nondistinct_dim4, verify_automorphism,
};
use crate::paut::{paut_with, PautOptions};
use crate::permgroup::{PermGroup, Permutation};
use crate::registry::{self, sha256_hex};
use crate::sigma::{block_profile, huffman_decompose, is_sigma_invariant, orbit_weight_classify, SigmaAction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Fixtures,
    Sigma,
    Involutions,
    Canonical,
    Paut,
    Count,
    Census,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Fixtures,
        Category::Sigma,
        Category::Involutions,
        Category::Canonical,
        Category::Paut,
        Category::Count,
        Category::Census,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Fixtures => "fixtures",
            Category::Sigma => "sigma",
            Category::Involutions => "involutions",
            Category::Canonical => "canonical",
            Category::Paut => "paut",
            Category::Count => "count",
            Category::Census => "census",
        }
    }

    pub fn parse(s: &str) -> Option<Category> {
        Category::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub id: String,
    pub category: Category,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Default)]
pub struct RegressionOptions {
    /// Categories to run; empty runs all.
    pub only: Vec<Category>,
    /// Adds the length-15 census.
    pub full: bool,
    /// Reads `<name>.txt` from this directory instead of the bundled copy.
    pub fixture_dir: Option<PathBuf>,
    /// Replaces fixture text by name; takes precedence over `fixture_dir`.
    pub overrides: HashMap<String, String>,
    pub paut: PautOptions,
    /// Worker threads for the census rows.
    pub jobs: Option<usize>,
}

struct Sources<'a> {
    opts: &'a RegressionOptions,
}

impl Sources<'_> {
    fn text(&self, name: &str) -> Result<String> {
        if let Some(t) = self.opts.overrides.get(name) {
            return Ok(t.clone());
        }
        if let Some(dir) = &self.opts.fixture_dir {
            let path = dir.join(format!("{name}.txt"));
            return std::fs::read_to_string(&path)
                .map_err(|e| Error::Structure(format!("fixture {}: {e}", path.display())));
        }
        Ok(registry::fixture(name)?.text.to_string())
    }

    fn file(&self, name: &str) -> Result<CodeFile> {
        parse_code_file(&self.text(name)?)
    }

    fn code(&self, name: &str) -> Result<LinearCode> {
        Ok(self.file(name)?.code())
    }
}

type CheckFn = fn(&Sources, &RegressionOptions) -> Result<(String, String)>;

struct Check {
    id: &'static str,
    category: Category,
    run: CheckFn,
}

fn perm(n: usize, s: &str) -> Result<Permutation> {
    Permutation::parse(n, s)
}

fn yes(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

fn paut_order(src: &Sources, opts: &RegressionOptions, name: &str, expected: &str) -> Result<(String, String)> {
    let r = paut_with(&src.code(name)?, &opts.paut)?;
    let mut actual = r.order().to_string();
    if !r.exact {
        actual.push_str(" (lower bound, timed out)");
    }
    Ok((expected.to_string(), actual))
}

/// All listed permutations are automorphisms of the fixture code.
fn printed_automorphisms(src: &Sources, name: &str, perms: &[&str]) -> Result<(String, String)> {
    let c = src.code(name)?;
    let mut ok = true;
    for p in perms {
        ok &= verify_automorphism(&c, &perm(c.len(), p)?)?;
    }
    Ok((yes(true), yes(ok)))
}

fn canonical_of_pairs(src: &Sources, name: &str) -> Result<CanonicalEM> {
    let f = src.file(name)?;
    let pairs: Vec<_> = f.rows.rows().iter().skip(1).cloned().collect();
    canonical_em_form_from_pairs(&pairs, SigmaAction::for_length(f.n)?)
}

fn hypothesis_a_alpha_beta(src: &Sources, name: &str, expected: &str) -> Result<(String, String)> {
    let c = src.code(name)?;
    let em = CanonicalEM::from_matrix(c.generator())?;
    let ab = em.involution_hypothesis_a()?;
    let ok = verify_automorphism(&c, &ab)?;
    let class = match em.hypothesis_class() {
        HypothesisClass::A => "A",
        HypothesisClass::B { .. } => "B",
    };
    Ok((format!("A {expected} automorphism"), format!("{class} {ab} {}", if ok { "automorphism" } else { "not-automorphism" })))
}

fn hypothesis_of(src: &Sources, name: &str) -> Result<(String, String)> {
    let em = crate::canonical::canonical_em_form(&src.code(name)?)?;
    let class = match em.hypothesis_class() {
        HypothesisClass::A => "A",
        HypothesisClass::B { .. } => "B",
    };
    Ok(("B".into(), class.into()))
}

fn orbit_class(src: &Sources, name: &str, expected: &str) -> Result<(String, String)> {
    let c = orbit_weight_classify(&src.code(name)?)?.class;
    Ok((expected.into(), format!("{c:?}")))
}

fn census(m: usize, expected: &str, opts: &RegressionOptions) -> Result<(String, String)> {
    let codes: Vec<LinearCode> = enumerate_cubic(m, 5, u64::MAX)?.collect();
    let census = classify(codes, &ClassifyOptions { paut: opts.paut, jobs: opts.jobs })?;
    let labels: Vec<String> = census.min_fingerprints().iter().map(ToString::to_string).collect();
    let min = census.min_order().map(|o| o.to_string()).unwrap_or_default();
    let mut actual = format!("{} classes, min order {min}, {}", census.class_count(), labels.join("/"));
    if !census.exact() {
        actual.push_str(" (inexact)");
    }
    Ok((expected.into(), actual))
}

const PRINTED_ALPHA: &str = "(1,4)(2,6)(3,5)(8,9)(10,17)(11,16)(12,18)(13,14)";

const CHECKS: &[Check] = &[
    Check {
        id: "pair-basis-block-profile",
        category: Category::Sigma,
        run: |src, _| {
            let f = src.file("pair_basis_18_4")?;
            let (v, w) = (f.rows.row(0), f.rows.row(1));
            let p = block_profile(v, w, SigmaAction::for_length(f.n)?)?;
            let one = |xs: &[usize]| xs.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
            let actual = format!(
                "wt {} {}; Jv\\Jw {{{}}}; Jw\\Jv {{{}}}; a(1,v)={} a(2,w)={}; identities {}",
                v.weight(),
                w.weight(),
                one(&p.r_w),
                one(&p.r_v),
                p.a_v.get(&0).map_or(0, |a| a[0] + 1),
                p.a_w.get(&1).map_or(0, |a| a[0] + 1),
                p.identities_hold()
            );
            Ok(("wt 6 6; Jv\\Jw {1,4}; Jw\\Jv {2,6}; a(1,v)=1 a(2,w)=4; identities true".into(), actual))
        },
    },
    Check {
        id: "pair-basis-equals-even-part",
        category: Category::Sigma,
        run: |src, _| {
            let c = src.code("pair_basis_18_4")?;
            let inv = is_sigma_invariant(&c)?;
            let d = huffman_decompose(&c)?;
            let actual = format!("invariant {inv}, F dim {}, E=C {}", d.fixed.dim(), d.even == c);
            Ok(("invariant true, F dim 0, E=C true".into(), actual))
        },
    },
    Check { id: "nondistinct-6-3-orbit-class", category: Category::Sigma, run: |s, _| orbit_class(s, "nondistinct_6_3", "NonDistinct") },
    Check { id: "distinct-30-4-orbit-class", category: Category::Sigma, run: |s, _| orbit_class(s, "distinct_30_4", "Distinct") },
    Check { id: "order3-18-6-orbit-class", category: Category::Sigma, run: |s, _| orbit_class(s, "order3_18_6", "NonDistinct") },
    Check { id: "order3-30-10-orbit-class", category: Category::Sigma, run: |s, _| orbit_class(s, "order3_30_10", "NonDistinct") },
    Check {
        id: "selfdual-30-15-parts-self-orthogonal",
        category: Category::Sigma,
        run: |src, _| {
            let mut out = Vec::new();
            for name in ["selfdual_30_15", "selfdual_30_15_b"] {
                let c = src.code(name)?;
                let d = huffman_decompose(&c)?;
                out.push(format!(
                    "{} {} {}",
                    c.is_self_dual(),
                    d.fixed.is_self_orthogonal(),
                    d.even.is_self_orthogonal()
                ));
            }
            Ok(("true true true; true true true".into(), out.join("; ")))
        },
    },
    Check {
        id: "printed-alpha-is-automorphism",
        category: Category::Involutions,
        run: |src, _| {
            let f = src.file("pair_basis_18_4")?;
            let c = f.code();
            let a = perm(f.n, PRINTED_ALPHA)?;
            let maps = a.apply_word(f.rows.row(0))? == *f.rows.row(1);
            let actual = format!("v^a=w {maps}, automorphism {}", verify_automorphism(&c, &a)?);
            Ok(("v^a=w true, automorphism true".into(), actual))
        },
    },
    Check {
        id: "printed-pair-recipe-gives-printed-alpha",
        category: Category::Involutions,
        run: |src, _| {
            let f = src.file("pair_basis_18_4")?;
            let (p, _) = equal_weight_involution(f.rows.row(0), f.rows.row(1), SigmaAction::for_length(f.n)?)?;
            Ok((PRINTED_ALPHA.into(), p.to_string()))
        },
    },
    Check {
        id: "nondistinct-dim4-involution",
        category: Category::Involutions,
        run: |src, _| {
            let c = src.code("pair_basis_18_4")?;
            let out = involution_nondistinct_dim4(&c)?;
            let actual = match out.permutation() {
                Some(p) => format!(
                    "involution {}, inverts sigma {}, automorphism {}",
                    p.is_involution(),
                    out.conjugates_sigma_to_inverse,
                    verify_automorphism(&c, p)?
                ),
                None => format!("not applicable: {}", out.reason().map(ToString::to_string).unwrap_or_default()),
            };
            Ok(("involution true, inverts sigma true, automorphism true".into(), actual))
        },
    },
    Check {
        id: "distinct-dim4-involution",
        category: Category::Involutions,
        run: |src, _| {
            let c = src.code("distinct_30_4")?;
            let out = involution_distinct_dim4(&c)?;
            let actual = match out.permutation() {
                Some(p) => format!("involution {}, automorphism {}", p.is_involution(), verify_automorphism(&c, p)?),
                None => format!("not applicable: {}", out.reason().map(ToString::to_string).unwrap_or_default()),
            };
            Ok(("involution true, automorphism true".into(), actual))
        },
    },
    Check { id: "small-6-5-printed-alpha", category: Category::Involutions, run: |s, _| printed_automorphisms(s, "small_6_5", &["(1,3)(5,6)"]) },
    Check {
        id: "small-9-5-printed-permutations",
        category: Category::Involutions,
        run: |s, _| printed_automorphisms(s, "small_9_5", &["(1,2)(5,6)(7,9)", "(1,3)(4,5)(8,9)", "(1,9)", "(2,7)", "(3,8)"]),
    },
    Check { id: "small-12-5-printed-alpha", category: Category::Involutions, run: |s, _| printed_automorphisms(s, "small_12_5", &["(1,3)(4,6)(8,9)(11,12)"]) },
    Check {
        id: "hypothesis-a-alpha-beta",
        category: Category::Involutions,
        run: |s, _| hypothesis_a_alpha_beta(s, "hypothesis_a_21_8", "(1,2)(4,5)(7,8)(10,11)(13,15)(16,17)(20,21)"),
    },
    Check {
        id: "hypothesis-a-alpha-beta-second",
        category: Category::Involutions,
        run: |s, _| hypothesis_a_alpha_beta(s, "hypothesis_a_21_8_b", "(1,2)(4,5)(7,8)(10,11)(14,15)(16,18)(19,20)"),
    },
    Check {
        id: "reduction-gamma",
        category: Category::Canonical,
        run: |s, _| Ok(("(1,13)(2,14)(3,15)(4,10)(5,11)(6,12)".into(), canonical_of_pairs(s, "reduction_15_5")?.gamma().to_string())),
    },
    Check {
        id: "reduction-final-matrix",
        category: Category::Canonical,
        run: |s, _| {
            let m = canonical_of_pairs(s, "reduction_15_5")?.matrix();
            let rows: Vec<String> = m.rows().iter().map(|r| r.grouped(3)).collect();
            Ok(("101 000 101 110 000 / 011 000 011 101 000 / 000 101 110 000 000 / 000 011 101 000 000".into(), rows.join(" / ")))
        },
    },
    Check { id: "order3-18-6-hypothesis", category: Category::Canonical, run: |s, _| hypothesis_of(s, "order3_18_6") },
    Check { id: "order3-30-10-hypothesis", category: Category::Canonical, run: |s, _| hypothesis_of(s, "order3_30_10") },
    Check { id: "nondistinct-6-3-order", category: Category::Paut, run: |s, o| paut_order(s, o, "nondistinct_6_3", "24") },
    Check { id: "distinct-30-4-order", category: Category::Paut, run: |s, o| paut_order(s, o, "distinct_30_4", "71663616") },
    Check {
        id: "small-6-5-order",
        category: Category::Paut,
        run: |s, o| {
            let r = paut_with(&s.code("small_6_5")?, &o.paut)?;
            Ok(("36 S3xS3".into(), format!("{} {}", r.order(), r.group.fingerprint())))
        },
    },
    Check { id: "small-9-5-order", category: Category::Paut, run: |s, o| paut_order(s, o, "small_9_5", "48") },
    Check {
        id: "small-9-5-printed-generators-span-group",
        category: Category::Paut,
        run: |s, o| {
            let c = s.code("small_9_5")?;
            let gens = ["(1,2,3)(4,5,6)(7,8,9)", "(1,9)", "(2,7)", "(3,8)", "(1,3)(4,5)(8,9)"]
                .iter()
                .map(|g| perm(9, g))
                .collect::<Result<Vec<_>>>()?;
            let h = PermGroup::from_generators(9, gens.iter().cloned())?;
            let g = paut_with(&c, &o.paut)?.group;
            let inside = gens.iter().all(|x| g.contains(x));
            Ok(("48 inside".into(), format!("{} {}", h.order(), if inside { "inside" } else { "outside" })))
        },
    },
    Check { id: "small-12-5-order", category: Category::Paut, run: |s, o| paut_order(s, o, "small_12_5", "12") },
    Check { id: "order3-18-6-order", category: Category::Paut, run: |s, o| paut_order(s, o, "order3_18_6", "3") },
    Check { id: "order3-30-10-order", category: Category::Paut, run: |s, o| paut_order(s, o, "order3_30_10", "3") },
    Check { id: "order3-36-18-order", category: Category::Paut, run: |s, o| paut_order(s, o, "order3_36_18", "3") },
    Check { id: "selfdual-30-15-order", category: Category::Paut, run: |s, o| paut_order(s, o, "selfdual_30_15", "49152") },
    Check { id: "selfdual-30-15-b-order", category: Category::Paut, run: |s, o| paut_order(s, o, "selfdual_30_15_b", "1440") },
    Check { id: "pairs-length-24-dim-5", category: Category::Count, run: |_, _| Ok(("8206520925".into(), count_cubic_pairs(8, 5).to_string())) },
    Check { id: "pairs-length-27-dim-5", category: Category::Count, run: |_, _| Ok(("263945834061".into(), count_cubic_pairs(9, 5).to_string())) },
    Check { id: "census-length-6", category: Category::Census, run: |_, o| census(2, "2 classes, min order 36, S3xS3", o) },
    Check { id: "census-length-9", category: Category::Census, run: |_, o| census(3, "15 classes, min order 12, D12", o) },
    Check { id: "census-length-12", category: Category::Census, run: |_, o| census(4, "67 classes, min order 6, S3", o) },
];

const FULL_CHECKS: &[Check] = &[Check {
    id: "census-length-15",
    category: Category::Census,
    run: |_, o| census(5, "244 classes, min order 6, S3", o),
}];

fn row(id: String, category: Category, started: Instant, out: Result<(String, String)>) -> CheckRow {
    let (expected, actual) = match out {
        Ok(p) => p,
        Err(e) => ("(no error)".into(), format!("error: {e}")),
    };
    CheckRow {
        pass: expected == actual,
        id,
        category,
        expected,
        actual,
        elapsed_ms: started.elapsed().as_millis(),
    }
}

/// Runs the suite. A missing or damaged fixture fails its rows.
pub fn run(opts: &RegressionOptions) -> Vec<CheckRow> {
    let selected = |c: Category| opts.only.is_empty() || opts.only.contains(&c);
    let src = Sources { opts };
    let mut rows = Vec::new();
    if selected(Category::Fixtures) {
        for f in registry::FIXTURES {
            let t = Instant::now();
            let out = src.text(f.name).map(|text| (f.sha256.to_string(), sha256_hex(&text)));
            rows.push(row(format!("checksum-{}", f.name), Category::Fixtures, t, out));
        }
    }
    let extra: &[Check] = if opts.full { FULL_CHECKS } else { &[] };
    for c in CHECKS.iter().chain(extra).filter(|c| selected(c.category)) {
        let t = Instant::now();
        let out = (c.run)(&src, opts);
        rows.push(row(c.id.to_string(), c.category, t, out));
    }
    rows
}

/// Total elapsed time over rows.
pub fn total_elapsed(rows: &[CheckRow]) -> Duration {
    Duration::from_millis(rows.iter().map(|r| r.elapsed_ms as u64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_rows_pass() {
        let rows = run(&RegressionOptions { only: vec![Category::Count], ..Default::default() });
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.pass));
    }

    #[test]
    fn category_names_round_trip() {
        for c in Category::ALL {
            assert_eq!(Category::parse(c.as_str()), Some(c));
        }
        assert_eq!(Category::parse("nope"), None);
    }
}
