//! CSV point clouds: a header row of coordinate names, then one point per
//! row with 17 significant digits.

use std::io::{self, Write};
use std::path::Path;

pub fn write_cloud<W: Write>(mut out: W, header: &[String], points: &[Vec<f64>]) -> io::Result<()> {
    if let Some(p) = points.iter().find(|p| p.len() != header.len()) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("point of dimension {} under a header of {} columns", p.len(), header.len()),
        ));
    }
    writeln!(out, "{}", header.join(","))?;
    for p in points {
        let row: Vec<String> = p.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()
}

pub fn emit_cloud(path: &Path, header: &[String], points: &[Vec<f64>]) -> io::Result<()> {
    let file = std::fs::File::create(path)?;
    write_cloud(io::BufWriter::new(file), header, points)
}

/// `prefix1, ..., prefixn`.
pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let pts = vec![vec![0.1, -2.5e-300], vec![1.0 / 3.0, f64::MAX]];
        let mut buf = Vec::new();
        write_cloud(&mut buf, &names("x", 2), &pts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x1,x2"));
        for (line, p) in lines.zip(&pts) {
            let back: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            assert_eq!(&back, p);
        }
        assert!(text.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn empty_cloud_is_header_only() {
        let mut buf = Vec::new();
        write_cloud(&mut buf, &["x1".into(), "t".into()], &[]).unwrap();
        assert_eq!(buf, b"x1,t\n");
    }

    #[test]
    fn ragged_points_are_rejected() {
        let err = write_cloud(Vec::new(), &names("x", 2), &[vec![1.0]]).unwrap_err();
        assert_eq!(err.kind(), io::ErrorKind::InvalidInput);
    }
}
