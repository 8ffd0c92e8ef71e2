//! Checking the consistency conditions of a local rule.

use std::fmt;

use rand::Rng;

use crate::codec::{code_string, enumerate_disks, CodecError};
use crate::graph::{glue_keyed, CayleyGraph, Disk, Label, NameKey, PortGraph, Suffix};
use crate::random::{random_graph_upto, seeded};

use super::{check_image, LocalRule, RuleError};

pub const MAX_WITNESSES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMode {
    /// Every disk of the needed radii, failing past `budget` disks per radius.
    Exhaustive { budget: usize },
    /// Disks cut from `samples` seeded random graphs per condition.
    Sampled { samples: usize, seed: u64 },
    /// Exhaustive for each radius whose disks fit in `budget`, sampled for
    /// the others.
    Auto { budget: usize, samples: usize, seed: u64 },
}

/// Which obligation a witness breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// A single image breaks the naming constraints or the bound.
    Image,
    /// `f(X^r)` and `u.f(X_u^r)` for a neighbour `u` do not overlap
    /// consistently.
    NonTrivialOverlap,
    /// `f(X^r)` and `u.f(X_u^r)` for a farther `u` clash.
    Overlap,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Image => "image",
            Condition::NonTrivialOverlap => "non-trivial-overlap",
            Condition::Overlap => "overlap",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub condition: Condition,
    /// Code of the disk the check ran on.
    pub disk: String,
    /// Canonical name of the shift inside that disk.
    pub shift: String,
    pub verdict: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} disk={} u={} {}",
            self.condition, self.disk, self.shift, self.verdict
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coverage {
    /// Whether the image, near and far inputs were all disks of their
    /// radius, in that order.
    pub exhaustive: [bool; 3],
    pub image_disks: usize,
    pub near_disks: usize,
    pub far_disks: usize,
    /// Pairs `(disk, u)` compared.
    pub shifts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub rule: String,
    pub bound_ok: bool,
    pub max_image: usize,
    /// Total number of failed checks.
    pub failures: usize,
    /// The first failures, at most [`MAX_WITNESSES`] of them.
    pub witnesses: Vec<Witness>,
    pub coverage: Coverage,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.bound_ok && self.failures == 0
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coverage;
        writeln!(f, "rule {}", self.rule)?;
        writeln!(f, "verdict {}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(
            f,
            "bound_ok {} max_image {} failures {}",
            self.bound_ok, self.max_image, self.failures
        )?;
        writeln!(
            f,
            "coverage image_disks={}{} near_disks={}{} far_disks={}{} shifts={}",
            c.image_disks,
            kind(c.exhaustive[0]),
            c.near_disks,
            kind(c.exhaustive[1]),
            c.far_disks,
            kind(c.exhaustive[2]),
            c.shifts
        )?;
        for w in &self.witnesses {
            writeln!(f, "witness {w}")?;
        }
        Ok(())
    }
}

fn kind(exhaustive: bool) -> &'static str {
    if exhaustive {
        "(all)"
    } else {
        "(sampled)"
    }
}

/// Validates a rule over Σ-indexed labels.
pub fn validate_local_rule(f: &LocalRule<u16>, mode: ValidationMode) -> Result<ValidationReport, RuleError> {
    let p = *f.params();
    let r = p.radius;
    let radii = [r, r + 1, 3 * r + 2];
    let (budget, samples, seed) = match mode {
        ValidationMode::Exhaustive { budget } => (Some(budget), None, 0),
        ValidationMode::Sampled { samples, seed } => (None, Some(samples), seed),
        ValidationMode::Auto { budget, samples, seed } => (Some(budget), Some(samples), seed),
    };
    let mut rng = seeded(seed);
    let mut exhaustive = [false; 3];
    let mut sets: Vec<Vec<CayleyGraph<u16>>> = Vec::new();
    for (i, k) in radii.into_iter().enumerate() {
        let listed = match budget {
            Some(b) => match enumerate_disks(p.ports, p.labels, k, b) {
                Ok(disks) => Some(disks),
                Err(CodecError::BudgetExceeded { .. }) if samples.is_some() => None,
                Err(e) => return Err(e.into()),
            },
            None => None,
        };
        sets.push(match (listed, samples) {
            (Some(disks), _) => {
                exhaustive[i] = true;
                disks.into_iter().map(Disk::into_graph).collect()
            }
            (None, Some(n)) => {
                let max = (4 + 3 * k).min(40);
                (0..n)
                    .map(|_| {
                        let x = random_graph_upto(&mut rng, p.ports, p.labels, max);
                        let v = rng.gen_range(0..x.vertex_count());
                        x.repoint(v)
                    })
                    .collect()
            }
            (None, None) => unreachable!(),
        });
    }
    let [image, near, far]: [Vec<CayleyGraph<u16>>; 3] = sets.try_into().unwrap();
    let mut report = validate_on(f, image.into_iter().map(|x| x.disk(r)), near, far)?;
    report.coverage.exhaustive = exhaustive;
    Ok(report)
}

/// Validates `f` on explicit inputs: `image` disks are checked on their own,
/// `near` graphs against every neighbour of the pointer (non-trivial
/// consistency on the disk of radius `r + 1`), `far` graphs against every
/// vertex within `2r + 2` (consistency on the disk of radius `3r + 2`).
pub fn validate_on<L: Label>(
    f: &LocalRule<L>,
    image: impl IntoIterator<Item = Disk<L>>,
    near: impl IntoIterator<Item = CayleyGraph<L>>,
    far: impl IntoIterator<Item = CayleyGraph<L>>,
) -> Result<ValidationReport, RuleError> {
    let r = f.radius();
    let mut v = Validator {
        f,
        report: ValidationReport {
            rule: f.name().to_string(),
            bound_ok: true,
            max_image: 0,
            failures: 0,
            witnesses: Vec::new(),
            coverage: Coverage::default(),
        },
    };
    for d in image {
        v.report.coverage.image_disks += 1;
        v.image_of(&d, &d, "ε")?;
    }
    for x in near {
        v.report.coverage.near_disks += 1;
        let d = x.disk(r + 1).into_graph();
        v.check_disk(&d, 1, true)?;
    }
    for x in far {
        v.report.coverage.far_disks += 1;
        let d = x.disk(3 * r + 2).into_graph();
        v.check_disk(&d, 2 * r + 2, false)?;
    }
    Ok(v.report)
}

struct Validator<'a, L> {
    f: &'a LocalRule<L>,
    report: ValidationReport,
}

impl<L: Label> Validator<'_, L> {
    fn witness(&mut self, condition: Condition, disk: &CayleyGraph<L>, shift: &str, verdict: String) {
        self.report.failures += 1;
        if self.report.witnesses.len() >= MAX_WITNESSES {
            return;
        }
        self.report.witnesses.push(Witness {
            condition,
            disk: code_string(disk),
            shift: shift.to_string(),
            verdict,
        });
    }

    fn image_error(&mut self, e: &RuleError, context: &CayleyGraph<L>, shift: &str) {
        if let RuleError::ImageTooLarge { size, .. } = e {
            self.report.bound_ok = false;
            self.report.max_image = self.report.max_image.max(*size);
        }
        self.witness(Condition::Image, context, shift, e.to_string());
    }

    /// The image of `disk`, recording naming and bound violations against
    /// `context`. `None` where the rule is undefined.
    fn image_of(
        &mut self,
        disk: &Disk<L>,
        context: &CayleyGraph<L>,
        shift: &str,
    ) -> Result<Option<PortGraph<L>>, RuleError> {
        let img = match self.f.apply(disk) {
            Ok(Some(img)) => img,
            Ok(None) => return Ok(None),
            Err(e @ (RuleError::WrongRadius { .. } | RuleError::ParamMismatch(_))) => return Err(e),
            Err(e) => {
                self.image_error(&e, context, shift);
                return Ok(None);
            }
        };
        self.report.max_image = self.report.max_image.max(img.vertex_count());
        if let Err(e) = check_image(self.f.params(), disk, &img) {
            self.image_error(&e, context, shift);
        }
        Ok(Some(img))
    }

    fn check_disk(&mut self, d: &CayleyGraph<L>, reach: usize, non_trivial: bool) -> Result<(), RuleError> {
        let r = self.f.radius();
        let depth = d.depths();
        let (d0, origin0) = d.disk_around(0, r);
        let Some(img0) = self.image_of(&d0, d, "ε")? else {
            return Ok(());
        };
        let Some(keys0) = self.keys(&img0, &d0, &origin0, d, "ε") else {
            return Ok(());
        };
        for (u, &du_depth) in depth.iter().enumerate().take(d.vertex_count()) {
            if du_depth > reach {
                continue;
            }
            let shift = d.name(u).to_string();
            let (du, origin_u) = d.disk_around(u, r);
            let Some(img_u) = self.image_of(&du, d, &shift)? else {
                continue;
            };
            let Some(keys_u) = self.keys(&img_u, &du, &origin_u, d, &shift) else {
                continue;
            };
            self.report.coverage.shifts += 1;
            let parts = [img0.clone(), img_u];
            let all = [&keys0, &keys_u];
            match glue_keyed(self.f.params().ports, &parts, |p, v| all[p][v].clone()) {
                Err(clash) => {
                    let cond = if non_trivial {
                        Condition::NonTrivialOverlap
                    } else {
                        Condition::Overlap
                    };
                    self.witness(cond, d, &shift, clash.to_string());
                }
                Ok(glued) => {
                    let overlap = glued
                        .members
                        .iter()
                        .any(|m| m.iter().any(|x| x.0 == 0) && m.iter().any(|x| x.0 == 1));
                    if non_trivial && !overlap {
                        self.witness(Condition::NonTrivialOverlap, d, &shift, "images do not overlap".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// Resolves image names to `(vertex of d, suffix)` keys.
    fn keys(
        &mut self,
        img: &PortGraph<L>,
        disk: &Disk<L>,
        origin: &[usize],
        d: &CayleyGraph<L>,
        shift: &str,
    ) -> Option<Vec<Vec<(usize, Suffix)>>> {
        let mut out = Vec::with_capacity(img.vertex_count());
        for v in 0..img.vertex_count() {
            let mut ks = Vec::new();
            for k in img.name(v).elements() {
                let resolved = match k {
                    NameKey::Elem(e) => disk.vertex_at(&e.path).map(|w| (origin[w], e.suffix)),
                    NameKey::Raw(_) => None,
                };
                match resolved {
                    Some(key) => ks.push(key),
                    None => {
                        let verdict = format!("unresolvable name {}", img.name(v));
                        self.witness(Condition::Image, d, shift, verdict);
                        return None;
                    }
                }
            }
            out.push(ks);
        }
        Some(out)
    }
}
