//! Text and JSON renderings. The JSON term list is the canonical text split
//! at the top-level `+`, so both forms carry the same normal form.

use std::fmt::Write;

use serde::Serialize;

use tsys::laurent::{LaurentPoly, Monomial};
use tsys::network::{Elementary, NetworkInstance, NetworkMatrix};

use crate::config::RunConfig;
use crate::Format;

#[derive(Serialize)]
struct Term {
    coeff: String,
    factors: Vec<(String, i32)>,
    text: String,
}

impl Term {
    fn of(m: &Monomial) -> Self {
        Term {
            coeff: m.coeff.to_string(),
            factors: m.exps.iter().map(|(v, e)| (v.to_string(), e)).collect(),
            text: m.to_string(),
        }
    }
}

fn terms(p: &LaurentPoly) -> Vec<Term> {
    p.terms().iter().map(Term::of).collect()
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// A computed polynomial plus optional notes.
#[derive(Serialize)]
pub struct Rendered {
    point: [i32; 3],
    surface: String,
    method: String,
    text: String,
    terms: Vec<Term>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<(String, String)>,
}

impl Rendered {
    pub fn solution(cfg: &RunConfig, method: &str, value: &LaurentPoly, note: Option<String>) -> Self {
        let p = cfg.point;
        Rendered {
            point: [p.i, p.j, p.k],
            surface: cfg.surface_name(),
            method: method.to_string(),
            text: value.to_string(),
            terms: terms(value),
            note,
            extra: Vec::new(),
        }
    }

    pub fn to_format(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Text => {
                let mut out = format!("{}\n", self.text);
                if let Some(note) = &self.note {
                    let _ = writeln!(out, "{note}");
                }
                for (k, v) in &self.extra {
                    let _ = writeln!(out, "{k} = {v}");
                }
                out
            }
        }
    }
}

#[derive(Serialize)]
pub struct MatchingRow {
    pub edges: Vec<usize>,
    #[serde(serialize_with = "as_text")]
    pub w_f: LaurentPoly,
    #[serde(serialize_with = "as_text")]
    pub w_p: LaurentPoly,
    #[serde(serialize_with = "as_text")]
    pub w_e: LaurentPoly,
}

fn as_text<S: serde::Serializer>(p: &LaurentPoly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

pub fn matchings(rows: &[MatchingRow], format: Format) -> String {
    if format == Format::Json {
        return to_json(&rows);
    }
    let mut out = format!("# {} matchings\n", rows.len());
    for (n, r) in rows.iter().enumerate() {
        let edges: Vec<String> = r.edges.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "m{n} edges={} w_f={} w_p={} w_e={}", edges.join(","), r.w_f, r.w_p, r.w_e);
    }
    out
}

#[derive(Serialize)]
struct ChipDump {
    position: usize,
    chip: usize,
    kind: String,
    row: i32,
    a: (i32, i32),
    b: (i32, i32),
    c: (i32, i32),
    d: (i32, i32),
    row_entries: Vec<(i32, String)>,
    diagonal: Vec<(i32, String)>,
}

#[derive(Serialize)]
struct NetworkDump {
    rows: (i32, i32),
    q: String,
    chips: Vec<ChipDump>,
    matrix: Vec<(i32, i32, String)>,
}

pub fn network(ni: &NetworkInstance, order: &[usize], chips: &[Elementary], m: &NetworkMatrix, format: Format) -> String {
    let (lo, hi) = ni.network.rows();
    let text_pairs = |v: &[(i32, LaurentPoly)]| v.iter().map(|(r, w)| (*r, w.to_string())).collect::<Vec<_>>();
    let dump = NetworkDump {
        rows: (lo, hi),
        q: ni.q().to_string(),
        chips: order
            .iter()
            .zip(chips)
            .enumerate()
            .map(|(position, (&x, e))| {
                let chip = &ni.network.chips()[x];
                ChipDump {
                    position,
                    chip: x,
                    kind: chip.kind.to_string(),
                    row: chip.row,
                    a: chip.labels.a,
                    b: chip.labels.b,
                    c: chip.labels.c,
                    d: chip.labels.d,
                    row_entries: text_pairs(&e.entries),
                    diagonal: text_pairs(&e.diagonal),
                }
            })
            .collect(),
        matrix: (lo..=hi)
            .flat_map(|a| (lo..=hi).map(move |b| (a, b)))
            .filter(|&(a, b)| !m.get(a, b).is_zero())
            .map(|(a, b)| (a, b, m.get(a, b).to_string()))
            .collect(),
    };
    if format == Format::Json {
        return to_json(&dump);
    }
    let mut out = format!("rows {lo}..{hi}\nQ = {}\n", dump.q);
    let _ = writeln!(out, "# {} chips in application order", dump.chips.len());
    for c in &dump.chips {
        let _ = writeln!(
            out,
            "chip {} #{} {} row {} a={:?} b={:?} c={:?} d={:?}",
            c.position, c.chip, c.kind, c.row, c.a, c.b, c.c, c.d
        );
        for (r, w) in &c.row_entries {
            let _ = writeln!(out, "  ({},{r}) {w}", c.row);
        }
        for (r, w) in &c.diagonal {
            let _ = writeln!(out, "  ({r},{r}) {w}");
        }
    }
    let _ = writeln!(out, "# network matrix, nonzero entries");
    for (a, b, w) in &dump.matrix {
        let _ = writeln!(out, "({a},{b}) {w}");
    }
    out
}
