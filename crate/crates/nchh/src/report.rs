//! CSV and JSON serialization of certificates and sweep tables.
//!
//! Numeric CSV fields are rendered with 17 significant digits so every
//! value round-trips exactly; fields containing commas or quotes are
//! RFC-4180 quoted. JSON documents carry the schema version `nchh/1`.

use serde::Serialize;

use crate::bounds::BoundCertificate;
use crate::interval::Interval;

pub const SCHEMA_VERSION: &str = "nchh/1";

/// Certificate CSV header; one row per certificate.
pub const CERTIFICATE_CSV_HEADER: &str = "rule,n,a,b,f,phi,class,mean,lower,upper,holds,n_free";

/// Sweep CSV header: the certificate columns plus the per-n diagnostics
/// (envelope width, the parity-split lower error term, and n²Φ((b-a)/n)).
pub const SWEEP_CSV_HEADER: &str =
    "rule,n,a,b,f,phi,class,mean,lower,upper,holds,n_free,width,e_n,n2_phi";

/// 17-significant-digit scientific rendering; round-trip safe for f64.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn certificate_fields(cert: &BoundCertificate, f_label: &str, interval: &Interval) -> Vec<String> {
    vec![
        cert.rule.name().to_string(),
        cert.n.to_string(),
        format_f64(interval.a()),
        format_f64(interval.b()),
        csv_field(f_label),
        csv_field(&cert.phi),
        cert.class.name().to_string(),
        format_f64(cert.mean),
        format_f64(cert.lower),
        format_f64(cert.upper),
        cert.holds.to_string(),
        cert.n_free.to_string(),
    ]
}

/// One certificate as a CSV row (no trailing newline).
pub fn certificate_csv_row(cert: &BoundCertificate, f_label: &str, interval: &Interval) -> String {
    certificate_fields(cert, f_label, interval).join(",")
}

/// Header plus a single row, newline-terminated.
pub fn certificate_csv(cert: &BoundCertificate, f_label: &str, interval: &Interval) -> String {
    format!(
        "{CERTIFICATE_CSV_HEADER}\n{}\n",
        certificate_csv_row(cert, f_label, interval)
    )
}

#[derive(Serialize)]
struct CertificateDoc<'a> {
    schema: &'static str,
    timestamp: &'a str,
    f: &'a str,
    a: f64,
    b: f64,
    rule: &'a str,
    n: u32,
    class: &'a str,
    phi: &'a str,
    theorem: &'a str,
    mean: f64,
    lower: f64,
    upper: f64,
    margin_lower: f64,
    margin_upper: f64,
    holds: bool,
    n_free: bool,
    hypothesis: &'a str,
}

fn certificate_doc<'a>(
    cert: &'a BoundCertificate,
    f_label: &'a str,
    interval: &Interval,
    timestamp: &'a str,
) -> CertificateDoc<'a> {
    CertificateDoc {
        schema: SCHEMA_VERSION,
        timestamp,
        f: f_label,
        a: interval.a(),
        b: interval.b(),
        rule: cert.rule.name(),
        n: cert.n,
        class: cert.class.name(),
        phi: &cert.phi,
        theorem: &cert.theorem,
        mean: cert.mean,
        lower: cert.lower,
        upper: cert.upper,
        margin_lower: cert.margin_lower,
        margin_upper: cert.margin_upper,
        holds: cert.holds,
        n_free: cert.n_free,
        hypothesis: cert.hypothesis.as_str(),
    }
}

/// One certificate as a pretty-printed JSON document, newline-terminated.
/// The caller supplies the ISO-8601 timestamp.
pub fn certificate_json(
    cert: &BoundCertificate,
    f_label: &str,
    interval: &Interval,
    timestamp: &str,
) -> String {
    let doc = certificate_doc(cert, f_label, interval, timestamp);
    let mut s = serde_json::to_string_pretty(&doc).expect("certificate serialization");
    s.push('\n');
    s
}

/// One sweep row: a certificate plus the per-n diagnostic columns.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub certificate: BoundCertificate,
    pub e_n: f64,
    pub n2_phi: f64,
}

impl SweepRow {
    pub fn width(&self) -> f64 {
        self.certificate.upper - self.certificate.lower
    }
}

/// Sweep table as CSV, one row per admissible n, newline-terminated.
pub fn sweep_csv(rows: &[SweepRow], f_label: &str, interval: &Interval) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&certificate_csv_row(&row.certificate, f_label, interval));
        out.push(',');
        out.push_str(&format_f64(row.width()));
        out.push(',');
        out.push_str(&format_f64(row.e_n));
        out.push(',');
        out.push_str(&format_f64(row.n2_phi));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct SweepRowDoc<'a> {
    rule: &'a str,
    n: u32,
    class: &'a str,
    phi: &'a str,
    theorem: &'a str,
    mean: f64,
    lower: f64,
    upper: f64,
    margin_lower: f64,
    margin_upper: f64,
    holds: bool,
    n_free: bool,
    hypothesis: &'a str,
    width: f64,
    e_n: f64,
    n2_phi: f64,
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    schema: &'static str,
    timestamp: &'a str,
    f: &'a str,
    a: f64,
    b: f64,
    rows: Vec<SweepRowDoc<'a>>,
}

/// Sweep table as a JSON document, newline-terminated.
pub fn sweep_json(
    rows: &[SweepRow],
    f_label: &str,
    interval: &Interval,
    timestamp: &str,
) -> String {
    let doc = SweepDoc {
        schema: SCHEMA_VERSION,
        timestamp,
        f: f_label,
        a: interval.a(),
        b: interval.b(),
        rows: rows
            .iter()
            .map(|row| {
                let c = &row.certificate;
                SweepRowDoc {
                    rule: c.rule.name(),
                    n: c.n,
                    class: c.class.name(),
                    phi: &c.phi,
                    theorem: &c.theorem,
                    mean: c.mean,
                    lower: c.lower,
                    upper: c.upper,
                    margin_lower: c.margin_lower,
                    margin_upper: c.margin_upper,
                    holds: c.holds,
                    n_free: c.n_free,
                    hypothesis: c.hypothesis.as_str(),
                    width: row.width(),
                    e_n: row.e_n,
                    n2_phi: row.n2_phi,
                }
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("sweep serialization");
    s.push('\n');
    s
}
