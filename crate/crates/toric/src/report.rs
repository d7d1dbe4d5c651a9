//! The autoequivalence structure report: what the group Aut(D(X)) looks like
//! for a given fan, as checkable data.
//!
//! Reports are computed on the canonical form of the fan, so equivalent fans
//! produce byte-identical output. The structured rendering (`toric-report/1`)
//! is a flat `key: value` text that parses back losslessly.

use std::fmt::Write as _;

use thiserror::Error;

use crate::divisor::picard;
use crate::fan::Fan;
use crate::neg2::{check_conditions, ConditionsReport, InvariantViolation};
use crate::{Coord, Int};

pub const SCHEMA: &str = "toric-report/1";

/// The caveat attached to every report: only the lattice symmetries of the
/// fan and the torus factor of Aut(X) are enumerated here.
pub const AUT_X_CAVEAT: &str =
    "fan symmetries and the 2-torus only; this part of Aut(X) is not claimed complete";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// No -2-curves: every autoequivalence is standard, Aut(D(X)) = A(X).
    StandardOnly,
    /// Aut(D(X)) is generated by Pic(X), Aut(X), shifts and the twist group
    /// B(X), but the twist part does not split off.
    Generated,
    /// The full semidirect decomposition B(X) x| (P x| Aut(X)) x Z[1] holds,
    /// with an explicit complement P.
    Semidirect,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::StandardOnly => "STANDARD_ONLY",
            Conclusion::Generated => "GENERATED",
            Conclusion::Semidirect => "SEMIDIRECT",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "STANDARD_ONLY" => Some(Conclusion::StandardOnly),
            "GENERATED" => Some(Conclusion::Generated),
            "SEMIDIRECT" => Some(Conclusion::Semidirect),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutStructureReport {
    pub ray_count: usize,
    /// Self-intersection profile of the canonical form.
    pub profile: Vec<Coord>,
    /// Chains of -2-rays (0-based canonical ray indices).
    pub chain_rays: Vec<Vec<usize>>,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    /// (first chain, second chain, separating ray), all 0-based.
    pub c4_witnesses: Vec<(usize, usize, usize)>,
    pub splits: bool,
    pub torsion: Vec<Int>,
    /// Basis of a complement of Pic_Delta when the inclusion splits.
    pub complement: Option<Vec<Vec<Coord>>>,
    pub symmetry_order: usize,
    pub torus_rank: usize,
    pub conclusion: Conclusion,
}

impl AutStructureReport {
    pub fn chain_lengths(&self) -> Vec<usize> {
        self.chain_rays.iter().map(Vec::len).collect()
    }
}

/// Run the full chain/condition analysis on the canonical form of the fan
/// and assemble the structure report.
pub fn analyze(fan: &Fan) -> Result<AutStructureReport, InvariantViolation> {
    let canon = fan.canonical_form();
    let pic = picard(&canon);
    let conditions: ConditionsReport = check_conditions(&canon, &pic)?;
    let delta_empty = conditions.chains.chains.is_empty();
    let conclusion = if delta_empty {
        Conclusion::StandardOnly
    } else if conditions.c5.splits {
        Conclusion::Semidirect
    } else {
        Conclusion::Generated
    };
    Ok(AutStructureReport {
        ray_count: canon.ray_count(),
        profile: canon.self_intersections(),
        chain_rays: conditions.chains.chains.clone(),
        c1: conditions.c1,
        c2: conditions.c2,
        c3: conditions.c3,
        c4: conditions.c4,
        c4_witnesses: conditions
            .c4_witnesses
            .iter()
            .map(|w| (w.first_chain, w.second_chain, w.ray))
            .collect(),
        splits: conditions.c5.splits,
        torsion: conditions.c5.torsion.clone(),
        complement: conditions
            .c5
            .complement
            .as_ref()
            .map(|p| p.iter().map(|c| c.coords.clone()).collect()),
        symmetry_order: canon.symmetries().order(),
        torus_rank: 2,
        conclusion,
    })
}

fn list(values: impl IntoIterator<Item = String>) -> String {
    let items: Vec<String> = values.into_iter().collect();
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(" ")
    }
}

/// Deterministic flat key-value rendering; `parse_structured` inverts it.
pub fn render_structured(r: &AutStructureReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SCHEMA}");
    let _ = writeln!(out, "fan.rays: {}", r.ray_count);
    let _ = writeln!(out, "fan.profile: {}", list(r.profile.iter().map(|v| v.to_string())));
    let _ = writeln!(out, "chains.count: {}", r.chain_rays.len());
    let _ = writeln!(
        out,
        "chains.members: {}",
        if r.chain_rays.is_empty() {
            "-".to_string()
        } else {
            r.chain_rays
                .iter()
                .map(|c| c.iter().map(|&i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join("; ")
        }
    );
    let _ = writeln!(out, "conditions.c1: {}", r.c1);
    let _ = writeln!(out, "conditions.c2: {}", r.c2);
    let _ = writeln!(out, "conditions.c3: {}", r.c3);
    let _ = writeln!(out, "conditions.c4: {}", r.c4);
    let _ = writeln!(
        out,
        "conditions.c4.witnesses: {}",
        list(r.c4_witnesses.iter().map(|&(i, j, b)| format!("{}>{}:{}", i + 1, j + 1, b + 1)))
    );
    let _ = writeln!(out, "conditions.c5.splits: {}", r.splits);
    let _ = writeln!(out, "conditions.c5.torsion: {}", list(r.torsion.iter().map(|t| t.to_string())));
    let _ = writeln!(
        out,
        "conditions.c5.complement: {}",
        match &r.complement {
            None => "-".to_string(),
            Some(p) if p.is_empty() => "full".to_string(),
            Some(p) => p
                .iter()
                .map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join("; "),
        }
    );
    let _ = writeln!(out, "autx.symmetry-order: {}", r.symmetry_order);
    let _ = writeln!(out, "autx.torus-rank: {}", r.torus_rank);
    let _ = writeln!(out, "autx.caveat: {AUT_X_CAVEAT}");
    for (idx, chain) in r.chain_rays.iter().enumerate() {
        let _ = writeln!(
            out,
            "bgroup.chain.{}: generators T_{{O_C(i)}} for C in rays {}, i in Z; \
             the O_C(-1) twists generate a braid group on {} strand{}",
            idx + 1,
            chain.iter().map(|&i| (i + 1).to_string()).collect::<Vec<_>>().join(","),
            chain.len(),
            if chain.len() == 1 { "" } else { "s" }
        );
    }
    let _ = writeln!(out, "bgroup.decomposition: direct sum over chains (orthogonal twists commute)");
    let _ = writeln!(out, "intersections.autx-and-b: trivial");
    let _ = writeln!(out, "intersections.pic-and-b: Pic_Delta");
    let _ = writeln!(out, "conclusion: {}", r.conclusion.as_str());
    out
}

/// Human-readable rendering.
pub fn render_text(r: &AutStructureReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Autoequivalence structure report");
    let _ = writeln!(out, "================================");
    let _ = writeln!(out, "fan: {} rays, self-intersections {:?} (canonical form)", r.ray_count, r.profile);
    if r.chain_rays.is_empty() {
        let _ = writeln!(out, "-2-curves: none");
    } else {
        let _ = writeln!(
            out,
            "-2-curve chains: {}",
            r.chain_rays
                .iter()
                .map(|c| format!(
                    "A_{} (rays {})",
                    c.len(),
                    c.iter().map(|&i| format!("D_{}", i + 1)).collect::<Vec<_>>().join(" ")
                ))
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    let _ = writeln!(
        out,
        "conditions: (1) chains of type A: {}; (2) -K big: {}; (3) K.C=0 only on -2-curves: {}; (4) chains separated: {}",
        r.c1, r.c2, r.c3, r.c4
    );
    for &(i, j, b) in &r.c4_witnesses {
        let _ = writeln!(out, "  chain {} is met by D_{} which misses chain {}", i + 1, b + 1, j + 1);
    }
    if r.splits {
        let _ = writeln!(out, "condition (5): Pic_Delta is a direct summand of Pic");
        if let Some(p) = &r.complement {
            let _ = writeln!(
                out,
                "  complement P spanned by {}",
                if p.is_empty() {
                    "the full basis (Delta empty)".to_string()
                } else {
                    p.iter().map(|c| format!("pic:{:?}", c)).collect::<Vec<_>>().join(" ")
                }
            );
        }
    } else {
        let _ = writeln!(
            out,
            "condition (5) fails: Pic/Pic_Delta has torsion {:?}",
            r.torsion.iter().map(|t| format!("Z/{t}")).collect::<Vec<_>>()
        );
    }
    for (idx, chain) in r.chain_rays.iter().enumerate() {
        let _ = writeln!(
            out,
            "B(X) on chain {}: generated by twists T_{{O_C(i)}}, C among {}, i in Z; \
             the O_C(-1) twists form a braid group on {} strand{}",
            idx + 1,
            chain.iter().map(|&i| format!("D_{}", i + 1)).collect::<Vec<_>>().join(" "),
            chain.len(),
            if chain.len() == 1 { "" } else { "s" }
        );
    }
    if !r.chain_rays.is_empty() {
        let _ = writeln!(out, "B(X) = direct sum over chains (fully orthogonal twists commute)");
    }
    let _ = writeln!(
        out,
        "Aut(X): fan symmetry group of order {} and the {}-torus ({})",
        r.symmetry_order, r.torus_rank, AUT_X_CAVEAT
    );
    let _ = writeln!(out, "Aut(X) meets B(X) trivially; Pic(X) meets B(X) in Pic_Delta(X)");
    let verdict = match r.conclusion {
        Conclusion::StandardOnly => "Aut(D(X)) = A(X)".to_string(),
        Conclusion::Generated => {
            "Aut(D(X)) is generated by Pic(X), Aut(X), Z[1] and B(X)".to_string()
        }
        Conclusion::Semidirect => "Aut(D(X)) = B(X) \u{22ca} (P \u{22ca} Aut(X)) \u{00d7} Z[1]".to_string(),
    };
    let _ = writeln!(out, "conclusion: {} [{}]", verdict, r.conclusion.as_str());
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportParseError {
    #[error("missing schema header `{SCHEMA}`")]
    BadSchema,
    #[error("line {line}: expected `key: value`")]
    BadLine { line: usize },
    #[error("missing key `{key}`")]
    MissingKey { key: String },
    #[error("key `{key}`: cannot parse value `{value}`")]
    BadValue { key: String, value: String },
}

pub fn parse_structured(text: &str) -> Result<AutStructureReport, ReportParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == SCHEMA => {}
        _ => return Err(ReportParseError::BadSchema),
    }
    let mut kv: Vec<(String, String)> = Vec::new();
    for (idx, raw) in lines {
        if raw.trim().is_empty() {
            continue;
        }
        let (k, v) = raw.split_once(": ").ok_or(ReportParseError::BadLine { line: idx + 1 })?;
        kv.push((k.trim().to_string(), v.trim().to_string()));
    }
    let get = |key: &str| -> Result<&str, ReportParseError> {
        kv.iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| ReportParseError::MissingKey { key: key.to_string() })
    };
    let bad = |key: &str, value: &str| ReportParseError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    };
    let parse_usize = |key: &str| -> Result<usize, ReportParseError> {
        let v = get(key)?;
        v.parse().map_err(|_| bad(key, v))
    };
    let parse_bool = |key: &str| -> Result<bool, ReportParseError> {
        let v = get(key)?;
        v.parse().map_err(|_| bad(key, v))
    };

    let ray_count = parse_usize("fan.rays")?;
    let profile_raw = get("fan.profile")?;
    let profile: Vec<Coord> = if profile_raw == "-" {
        Vec::new()
    } else {
        profile_raw
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("fan.profile", profile_raw)))
            .collect::<Result<_, _>>()?
    };
    let chain_count = parse_usize("chains.count")?;
    let members_raw = get("chains.members")?;
    let chain_rays: Vec<Vec<usize>> = if members_raw == "-" {
        Vec::new()
    } else {
        members_raw
            .split("; ")
            .map(|chunk| {
                chunk
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map(|i| i - 1)
                            .map_err(|_| bad("chains.members", members_raw))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?
    };
    if chain_rays.len() != chain_count {
        return Err(bad("chains.count", members_raw));
    }
    let witnesses_raw = get("conditions.c4.witnesses")?;
    let c4_witnesses: Vec<(usize, usize, usize)> = if witnesses_raw == "-" {
        Vec::new()
    } else {
        witnesses_raw
            .split_whitespace()
            .map(|tok| {
                let parts: Vec<&str> = tok.split(['>', ':']).collect();
                if parts.len() != 3 {
                    return Err(bad("conditions.c4.witnesses", witnesses_raw));
                }
                let nums: Result<Vec<usize>, _> =
                    parts.iter().map(|p| p.parse::<usize>()).collect();
                match nums {
                    Ok(ns) => Ok((ns[0] - 1, ns[1] - 1, ns[2] - 1)),
                    Err(_) => Err(bad("conditions.c4.witnesses", witnesses_raw)),
                }
            })
            .collect::<Result<_, _>>()?
    };
    let torsion_raw = get("conditions.c5.torsion")?;
    let torsion: Vec<Int> = if torsion_raw == "-" {
        Vec::new()
    } else {
        torsion_raw
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("conditions.c5.torsion", torsion_raw)))
            .collect::<Result<_, _>>()?
    };
    let complement_raw = get("conditions.c5.complement")?;
    let complement: Option<Vec<Vec<Coord>>> = match complement_raw {
        "-" => None,
        "full" => Some(Vec::new()),
        other => Some(
            other
                .split("; ")
                .map(|chunk| {
                    chunk
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<Coord>()
                                .map_err(|_| bad("conditions.c5.complement", other))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?,
        ),
    };
    let conclusion_raw = get("conclusion")?;
    let conclusion =
        Conclusion::parse(conclusion_raw).ok_or_else(|| bad("conclusion", conclusion_raw))?;

    Ok(AutStructureReport {
        ray_count,
        profile,
        chain_rays,
        c1: parse_bool("conditions.c1")?,
        c2: parse_bool("conditions.c2")?,
        c3: parse_bool("conditions.c3")?,
        c4: parse_bool("conditions.c4")?,
        c4_witnesses,
        splits: parse_bool("conditions.c5.splits")?,
        torsion,
        complement,
        symmetry_order: parse_usize("autx.symmetry-order")?,
        torus_rank: parse_usize("autx.torus-rank")?,
        conclusion,
    })
}
