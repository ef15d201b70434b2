//! 16-bit binary greymap (`P5`, maxval 65535, big-endian samples).

use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scale {
    /// The largest entry maps to white.
    Max,
    /// 1.0 maps to white.
    Unit,
}

impl Scale {
    fn name(self) -> &'static str {
        match self {
            Scale::Max => "max",
            Scale::Unit => "unit",
        }
    }
}

/// Value that maps to white; zero when the matrix has no positive entry.
pub fn full_scale(m: &DMatrix<f64>, scale: Scale) -> f64 {
    match scale {
        Scale::Unit => 1.0,
        Scale::Max => m.iter().fold(0.0_f64, |a, &b| a.max(b)),
    }
}

pub fn grey_level(v: f64, full: f64) -> u16 {
    if full <= 0.0 || v.is_nan() || v <= 0.0 {
        return 0;
    }
    (v / full * 65535.0).round().min(65535.0) as u16
}

/// Renders `m` with `cell`×`cell` pixels per entry, row 0 at the top.
pub fn render(m: &DMatrix<f64>, scale: Scale, cell: usize) -> Vec<u8> {
    let full = full_scale(m, scale);
    let (w, h) = (m.ncols() * cell, m.nrows() * cell);
    let mut out = format!("P5\n# scale={} full_scale={full}\n{w} {h}\n65535\n", scale.name()).into_bytes();
    out.reserve(w * h * 2);
    for i in 0..h {
        for j in 0..w {
            out.extend_from_slice(&grey_level(m[(i / cell, j / cell)], full).to_be_bytes());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pixels(img: &[u8]) -> Vec<u16> {
        // header is four text lines
        let mut lines = 0;
        let start = img.iter().position(|&b| {
            lines += (b == b'\n') as usize;
            lines == 4
        });
        img[start.unwrap() + 1..].chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
    }

    #[test]
    fn zero_matrix_is_black() {
        let img = render(&DMatrix::zeros(3, 3), Scale::Max, 1);
        assert!(pixels(&img).iter().all(|&p| p == 0));
        assert!(img.starts_with(b"P5\n# scale=max full_scale=0\n3 3\n65535\n"));
    }

    #[test]
    fn identity_has_white_diagonal() {
        let img = render(&DMatrix::identity(3, 3).scale(0.25), Scale::Max, 1);
        assert_eq!(pixels(&img), vec![65535, 0, 0, 0, 65535, 0, 0, 0, 65535]);
    }

    #[test]
    fn hom_matrix_on_unit_scale() {
        let m = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        assert_eq!(pixels(&render(&m, Scale::Unit, 1)), vec![32768, 0, 0, 32768]);
    }

    #[test]
    fn cells_are_replicated_and_negatives_clamped() {
        let m = DMatrix::from_row_slice(1, 2, &[-1.0, 2.0]);
        let img = render(&m, Scale::Unit, 2);
        assert_eq!(pixels(&img), vec![0, 0, 65535, 65535, 0, 0, 65535, 65535]);
    }
}
