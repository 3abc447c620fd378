use std::fmt::Write;

use gsbs_core::twisted::{OracleRecord, ReidemeisterReport};
use gsbs_core::witness::{DegreeReport, Verdict};

pub fn degree_report(report: &DegreeReport) -> String {
    let mut out = String::new();
    let factors: Vec<String> = report
        .primes
        .iter()
        .map(|pp| format!("{}^{}", pp.p, pp.y))
        .collect();
    let _ = writeln!(
        out,
        "n = {} = {}, r = {}, m = {}",
        report.n,
        factors.join(" * "),
        report.r,
        report.m
    );
    if let Some(notice) = &report.notice {
        let _ = writeln!(out, "{notice}");
    }
    if report.verdict == Verdict::OutOfScope {
        return out;
    }

    let rows: Vec<[String; 7]> = report
        .certificates
        .iter()
        .map(|cert| {
            let r = &cert.reidemeister;
            [
                cert.c.to_string(),
                cert.k.to_string(),
                cert.det_m.to_string(),
                cert.det_m_minus_i.to_string(),
                r.count.as_ref().map_or("inf".into(), ToString::to_string),
                r.bound.to_string(),
                cert.m.to_string(),
            ]
        })
        .collect();
    let header = ["c", "k", "det M", "det(M-Id)", "R(phi)", "bound", "M"];
    let widths: Vec<usize> = (0..header.len())
        .map(|j| {
            rows.iter()
                .map(|row| row[j].len())
                .chain(std::iter::once(header[j].len()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join(" | ")
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for row in &rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
    let _ = writeln!(
        out,
        "verdict: none of the quotients with c <= {} has property R-infinity; the R-infinity nilpotency degree is infinite",
        report.c_max
    );
    out
}

pub fn reidemeister(report: &ReidemeisterReport) -> String {
    if !report.finite {
        return format!("R(phi) = infinite (det(M - Id) = {})\n", report.det_m_minus_i);
    }
    format!(
        "R(phi) = {} (exact)\ndet(M - Id) = {}, bound |det(M - Id)|*m^c = {}\n",
        report.count.as_ref().map_or("?".into(), ToString::to_string),
        report.det_m_minus_i,
        report.bound
    )
}

pub fn oracle(report: &ReidemeisterReport, record: &OracleRecord) -> String {
    let mut out = format!(
        "oracle: element box {}, conjugator box {}: {} classes (box {}: {})\n",
        record.element_box,
        record.conjugator_box,
        record.count_at_box,
        record.conjugator_box.saturating_sub(1),
        record.count_at_smaller_box
    );
    match record.count {
        Some(c) => {
            let _ = writeln!(out, "stable: R(phi) = {c}, bound {}", report.bound);
        }
        None => {
            let _ = writeln!(out, "unstable: no count asserted; enlarge the boxes");
        }
    }
    out
}
