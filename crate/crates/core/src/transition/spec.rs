use serde::{Deserialize, Serialize};

use crate::config::NeighboringPair;
use crate::error::{Error, Result};

/// One turning constraint `|x_site − u^target| ≤ rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    /// Position `i` of the turn in the turning sequence `k`.
    pub label: i64,
    /// Site `k_i`.
    pub site: i64,
    pub rho: f64,
    /// Target `u¹` when true, `u⁰` otherwise.
    pub upper: bool,
}

/// How targets were assigned to turns. The targets themselves are stored
/// per turn, so every pattern shares the same solver path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    /// `i ≡ 0, 1 (mod 4)` targets `u⁰`, `i ≡ 2, 3` targets `u¹`.
    Mod4,
    /// Constant `u^a` on the side `b·i < 0`, the mod-4 rule relative to `a`
    /// on the other.
    OneSided {
        a: u8,
        b: i8,
    },
    Explicit,
}

/// `true` when label `i` targets `u¹` under the mod-4 rule.
pub fn mod4_upper(i: i64) -> bool {
    matches!(i.rem_euclid(4), 2 | 3)
}

/// One-sided rule: `(upper, uses ρ₀)` for label `i`.
pub fn one_sided_target(a: u8, b: i8, label: i64) -> (bool, bool) {
    let i = b as i64 * label;
    if i < 0 {
        (a == 1, true)
    } else {
        (mod4_upper(i) != (a == 1), false)
    }
}

/// The computable surrogate of `X_{k,ρ}`: a finite run of turning
/// constraints, the truncation window and the neighboring pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionSpec {
    pub turns: Vec<Turn>,
    pub pattern: Pattern,
    /// Padding beyond the first and last turning site.
    pub margin: usize,
    /// Explicit window `[lo, hi]`, overriding the margin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
    pub pair: NeighboringPair,
}

/// Uniform or per-turn radii as read from JSON.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RhoInput {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum PatternInput {
    Named(String),
    Targets(Vec<u8>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecInput {
    k: Vec<i64>,
    #[serde(default)]
    k_start: i64,
    rho: RhoInput,
    #[serde(default = "default_pattern")]
    pattern: PatternInput,
    margin: usize,
    #[serde(default)]
    window: Option<(i64, i64)>,
    #[serde(default)]
    pair: Option<(f64, f64)>,
}

fn default_pattern() -> PatternInput {
    PatternInput::Named("mod4".into())
}

fn parse_one_sided(s: &str) -> Result<(u8, i8)> {
    let body = s
        .strip_prefix("one_sided:")
        .ok_or_else(|| Error::Parse(format!("unknown pattern {s:?}")))?;
    let body = body.trim_matches(|c| c == '{' || c == '}');
    let mut it = body.split(',').map(str::trim);
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(Error::Parse(format!("one-sided pattern needs a,b: {s:?}")));
    };
    let a: u8 = a
        .parse()
        .map_err(|_| Error::Parse(format!("bad a in {s:?}")))?;
    let b: i8 = b
        .trim_start_matches('+')
        .parse()
        .map_err(|_| Error::Parse(format!("bad b in {s:?}")))?;
    Ok((a, b))
}

impl TransitionSpec {
    /// Turns labelled `first_label, first_label+1, …` at the given sites.
    /// `rho` holds one radius per turn, or a single uniform radius.
    pub fn with_pattern(
        sites: &[i64],
        first_label: i64,
        rho: &[f64],
        pattern: Pattern,
        explicit: Option<&[bool]>,
        margin: usize,
        pair: NeighboringPair,
    ) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Invalid(
                "at least one turning index is required".into(),
            ));
        }
        let radius = |j: usize| -> Result<f64> {
            match rho.len() {
                1 => Ok(rho[0]),
                n if n == sites.len() => Ok(rho[j]),
                n => Err(Error::Invalid(format!(
                    "rho has {n} entries for {} turning indices",
                    sites.len()
                ))),
            }
        };
        let label0_rho = sites
            .iter()
            .enumerate()
            .find(|(j, _)| first_label + *j as i64 == 0)
            .map(|(j, _)| radius(j))
            .transpose()?
            .unwrap_or(rho[0]);
        let mut turns = Vec::with_capacity(sites.len());
        for (j, &site) in sites.iter().enumerate() {
            let label = first_label + j as i64;
            let (upper, r) = match (&pattern, explicit) {
                (Pattern::Mod4, _) => (mod4_upper(label), radius(j)?),
                (Pattern::OneSided { a, b }, _) => {
                    let (upper, zero) = one_sided_target(*a, *b, label);
                    (upper, if zero { label0_rho } else { radius(j)? })
                }
                (Pattern::Explicit, Some(t)) if t.len() == sites.len() => (t[j], radius(j)?),
                (Pattern::Explicit, _) => {
                    return Err(Error::Invalid(
                        "explicit pattern needs one target per turn".into(),
                    ))
                }
            };
            turns.push(Turn {
                label,
                site,
                rho: r,
                upper,
            });
        }
        let spec = TransitionSpec {
            turns,
            pattern,
            margin,
            window: None,
            pair,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `n` transitions under the mod-4 rule: labels `0..=2n` at sites
    /// `0, s, 2s, …` with a common radius.
    pub fn uniform(
        n_transitions: usize,
        spacing: i64,
        rho: f64,
        margin: usize,
        pair: NeighboringPair,
    ) -> Result<Self> {
        let sites: Vec<i64> = (0..=2 * n_transitions as i64)
            .map(|i| i * spacing)
            .collect();
        Self::with_pattern(&sites, 0, &[rho], Pattern::Mod4, None, margin, pair)
    }

    pub fn validate(&self) -> Result<()> {
        let half = self.pair.width() / 2.0;
        if self.turns.is_empty() {
            return Err(Error::Invalid(
                "at least one turning index is required".into(),
            ));
        }
        for w in self.turns.windows(2) {
            if w[1].site <= w[0].site {
                return Err(Error::Invalid(format!(
                    "turning indices must increase strictly: k_{} = {} then k_{} = {}",
                    w[0].label, w[0].site, w[1].label, w[1].site
                )));
            }
            if w[1].label != w[0].label + 1 {
                return Err(Error::Invalid("turn labels must be consecutive".into()));
            }
        }
        if let Some(t) = self.turns.iter().find(|t| t.label == 0) {
            if t.site != 0 {
                return Err(Error::Invalid(format!("k_0 must be 0, got {}", t.site)));
            }
        }
        for t in &self.turns {
            if !(t.rho > 0.0 && t.rho < half) {
                return Err(Error::Invalid(format!(
                    "rho_{} = {} must lie in (0, {half})",
                    t.label, t.rho
                )));
            }
        }
        let (lo, hi) = self.window();
        if lo > self.turns[0].site || hi < self.turns[self.turns.len() - 1].site || hi - lo < 2 {
            return Err(Error::Invalid(format!(
                "window [{lo}, {hi}] must contain every turning index and at least one interior site"
            )));
        }
        Ok(())
    }

    /// Truncation window `[lo, hi]`.
    pub fn window(&self) -> (i64, i64) {
        self.window.unwrap_or_else(|| {
            let m = self.margin as i64;
            (
                self.turns[0].site - m,
                self.turns[self.turns.len() - 1].site + m,
            )
        })
    }

    pub fn target(&self, turn: &Turn) -> f64 {
        self.pair.target(turn.upper)
    }

    pub fn sum_rho(&self) -> f64 {
        self.turns.iter().map(|t| t.rho).sum()
    }

    pub fn turn(&self, label: i64) -> Option<&Turn> {
        self.turns.iter().find(|t| t.label == label)
    }

    /// Number of target changes between consecutive turns.
    pub fn transitions(&self) -> usize {
        self.turns
            .windows(2)
            .filter(|w| w[0].upper != w[1].upper)
            .count()
    }

    /// Every gap between turns and the margin multiplied by `factor`,
    /// rounding up and keeping `k_0 = 0` fixed.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) {
            return Err(Error::Invalid(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        let scale = |s: i64| -> i64 {
            let v = (s.abs() as f64 * factor).ceil() as i64;
            v.max(1) * s.signum()
        };
        let anchor = self.turn(0).map(|t| t.site).unwrap_or(self.turns[0].site);
        let mut out = self.clone();
        for t in &mut out.turns {
            t.site = anchor + scale(t.site - anchor);
        }
        out.margin = (self.margin as f64 * factor).ceil() as usize;
        out.window = self
            .window
            .map(|(lo, hi)| (anchor + scale(lo - anchor), anchor + scale(hi - anchor)));
        out.validate()?;
        Ok(out)
    }

    /// Parse the JSON form `{"k": [...], "k_start": i, "rho": r | [...],
    /// "pattern": "mod4" | "one_sided:a,b" | [0/1 targets], "margin": m,
    /// "window": [lo, hi], "pair": [u0, u1]}`. The pair defaults to
    /// `default_pair`.
    pub fn from_json(text: &str, default_pair: NeighboringPair) -> Result<Self> {
        let input: SpecInput = serde_json::from_str(text)?;
        let pair = match input.pair {
            Some((u0, u1)) => NeighboringPair::new(u0, u1)?,
            None => default_pair,
        };
        let rho = match input.rho {
            RhoInput::One(r) => vec![r],
            RhoInput::Many(v) if !v.is_empty() => v,
            RhoInput::Many(_) => return Err(Error::Invalid("rho must not be empty".into())),
        };
        let targets: Vec<bool>;
        let (pattern, explicit) = match input.pattern {
            PatternInput::Named(s) if s == "mod4" => (Pattern::Mod4, None),
            PatternInput::Named(s) => {
                let (a, b) = parse_one_sided(&s)?;
                build_one_sided_check(a, b)?;
                (Pattern::OneSided { a, b }, None)
            }
            PatternInput::Targets(t) => {
                if t.iter().any(|&v| v > 1) {
                    return Err(Error::Invalid("explicit targets must be 0 or 1".into()));
                }
                targets = t.iter().map(|&v| v == 1).collect();
                (Pattern::Explicit, Some(targets.as_slice()))
            }
        };
        let mut spec = Self::with_pattern(
            &input.k,
            input.k_start,
            &rho,
            pattern,
            explicit,
            input.margin,
            pair,
        )?;
        if input.window.is_some() {
            spec.window = input.window;
            spec.validate()?;
        }
        Ok(spec)
    }
}

fn build_one_sided_check(a: u8, b: i8) -> Result<()> {
    if a > 1 || (b != 1 && b != -1) {
        return Err(Error::Invalid(format!(
            "one-sided pattern needs a ∈ {{0,1}}, b ∈ {{−1,1}}, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// One-sided variant: turns on the side `b·i < 0` all target `u^a` with
/// radius `ρ₀`; for `b·i ≥ 0` the mod-4 rule applies relative to `a`.
/// `sites` are the turning indices for labels `first_label, first_label+1, …`.
pub fn build_one_sided_spec(
    a: u8,
    b: i8,
    sites: &[i64],
    first_label: i64,
    rho: &[f64],
    margin: usize,
    pair: NeighboringPair,
) -> Result<TransitionSpec> {
    build_one_sided_check(a, b)?;
    TransitionSpec::with_pattern(
        sites,
        first_label,
        rho,
        Pattern::OneSided { a, b },
        None,
        margin,
        pair,
    )
}
