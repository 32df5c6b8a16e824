//! The `compute` output document and its JSON, CSV and text encodings.
//!
//! Every integer is a decimal string and every rational is `"num/den"`, so the
//! JSON form carries no numbers at all. Keys are emitted in sorted order.

use std::fmt::Write as _;

use num_rational::BigRational;
use ramfiltre::filtration::Filtration;
use ramfiltre::herbrand::{different_valuation, phi_from_filtration, upper_jumps};
use ramfiltre::model::tame_multiplier;
use ramfiltre::TameFactor;
use serde_json::{Map, Value};

/// `num/den` with the denominator always present.
pub fn rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// `q:e1:e2,...`, empty for the trivial factor.
pub fn tame_text(t: &TameFactor) -> String {
    t.primes
        .iter()
        .map(|(q, exps)| {
            let mut s = q.to_string();
            for e in exps {
                let _ = write!(s, ":{e}");
            }
            s
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn text(s: impl ToString) -> Value {
    Value::String(s.to_string())
}

fn object(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

/// The output document of a filtration.
pub fn document(f: &Filtration) -> Value {
    let spec = &f.spec;
    let spec_echo = object([
        ("p", text(&spec.p)),
        ("r", text(spec.r)),
        ("s", Value::Array(spec.s.iter().map(text).collect())),
        ("vclass", text(spec.vclass.short_name())),
        ("tame", text(tame_text(&spec.tame))),
        ("p2_asserted", Value::Bool(spec.p2_asserted)),
    ]);
    let levels = f
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            object([
                ("index", text(i)),
                ("jump", text(&l.jump)),
                ("family", text(l.family.tag())),
                ("k", text(l.k)),
                ("source", text(&l.source)),
                ("fixed_field", text(&l.fixed_field)),
                ("order", text(&l.group_order)),
            ])
        })
        .collect();
    let phi = phi_from_filtration(f);
    let herbrand = object([
        (
            "phi_breakpoints",
            Value::Array(
                phi.breakpoints.iter().map(|(u, v)| Value::Array(vec![text(rational(u)), text(rational(v))])).collect(),
            ),
        ),
        ("phi_slopes", Value::Array(phi.slopes.iter().map(|q| text(rational(q))).collect())),
        ("upper_jumps", Value::Array(upper_jumps(f).iter().map(|q| text(rational(q))).collect())),
    ]);
    object([
        ("spec", spec_echo),
        ("D", text(tame_multiplier(&spec.tame))),
        ("g0_order", text(&f.g0_order)),
        ("g1_order", text(&f.g1_order)),
        ("levels", Value::Array(levels)),
        ("herbrand", herbrand),
        ("different_valuation", text(different_valuation(f))),
    ])
}

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
pub fn to_json(doc: &Value) -> String {
    let mut out = serde_json::to_string_pretty(doc).unwrap_or_else(|e| unreachable!("string-only value: {e}"));
    out.push('\n');
    out
}

/// Leaves of the document as `(dotted.path, value)` pairs in key order.
pub fn flatten(doc: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&join(k), v, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| walk(&join(&i.to_string()), v, out)),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", doc, &mut out);
    out
}

/// Two-column `key,value` CSV of [`flatten`].
pub fn to_csv(doc: &Value) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"])?;
    for (k, v) in flatten(doc) {
        w.write_record([k, v])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).unwrap_or_else(|e| unreachable!("csv of utf-8 input: {e}")))
}

/// Human-readable summary.
pub fn to_text(f: &Filtration) -> String {
    let spec = &f.spec;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} p={} vclass={} D={} tame={}",
        spec.full_label(),
        spec.p,
        spec.vclass.short_name(),
        f.tame_degree,
        if spec.tame.is_trivial() { "-".to_string() } else { tame_text(&spec.tame) }
    );
    let _ = writeln!(out, "|G_0|={} |G_1|={}", f.g0_order, f.g1_order);
    let rows: Vec<[String; 7]> = f
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            [
                i.to_string(),
                l.jump.to_string(),
                l.family.tag().to_string(),
                l.k.to_string(),
                l.group_order.to_string(),
                l.fixed_field.to_string(),
                l.source.to_string(),
            ]
        })
        .collect();
    let header = ["level", "jump", "family", "k", "order", "fixed_field", "source"].map(String::from);
    let widths: Vec<usize> =
        (0..7).map(|c| rows.iter().chain([&header]).map(|r| r[c].len()).max().unwrap_or(0)).collect();
    for row in [&header].into_iter().chain(&rows) {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    let ups: Vec<String> = upper_jumps(f).iter().map(rational).collect();
    let _ = writeln!(out, "upper_jumps {}", ups.join(" "));
    let _ = writeln!(out, "different_valuation {}", different_valuation(f));
    out
}
