//! CSV exchange of boundary traces: one row per surface quadrature node, in
//! node order.

use std::io::{BufRead, Write};

use super::EmField;
use crate::error::{Error, Result};
use crate::geometry::SurfaceMesh;
use crate::quaternion::{Complex, ComplexVector3};

pub const TRACE_CSV_HEADER: &str =
    "triangle,e1_re,e1_im,e2_re,e2_im,e3_re,e3_im,h1_re,h1_im,h2_re,h2_im,h3_re,h3_im";

pub fn write_traces_csv<W: Write>(mesh: &SurfaceMesh, traces: &[EmField], mut out: W) -> Result<()> {
    if traces.len() != mesh.nodes().len() {
        return Err(Error::LengthMismatch {
            expected: mesh.nodes().len(),
            found: traces.len(),
        });
    }
    writeln!(out, "{TRACE_CSV_HEADER}")?;
    for (node, f) in mesh.nodes().iter().zip(traces) {
        write!(out, "{}", node.triangle)?;
        for v in [f.e, f.h] {
            for c in v.0 {
                write!(out, ",{:e},{:e}", c.re, c.im)?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_traces_csv<R: BufRead>(mesh: &SurfaceMesh, input: R) -> Result<Vec<EmField>> {
    let mut traces = Vec::with_capacity(mesh.nodes().len());
    let mut rows = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    match rows.next() {
        Some((_, Ok(h))) if h.trim() == TRACE_CSV_HEADER => {}
        Some((line, Ok(_))) => {
            return Err(Error::Parse {
                line,
                message: format!("expected header {TRACE_CSV_HEADER}"),
            })
        }
        Some((_, Err(e))) => return Err(e.into()),
        None => {
            return Err(Error::Parse {
                line: 0,
                message: "empty trace file".into(),
            })
        }
    }
    for (line, text) in rows {
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        if fields.len() != 13 {
            return Err(Error::Parse {
                line,
                message: format!("expected 13 columns, found {}", fields.len()),
            });
        }
        let index = traces.len();
        let Some(node) = mesh.nodes().get(index) else {
            return Err(Error::Parse {
                line,
                message: format!("more rows than the {} mesh nodes", mesh.nodes().len()),
            });
        };
        let triangle: usize = fields[0].parse().map_err(|e| Error::Parse {
            line,
            message: format!("triangle index: {e}"),
        })?;
        if triangle != node.triangle {
            return Err(Error::Parse {
                line,
                message: format!("row belongs to triangle {}, found {triangle}", node.triangle),
            });
        }
        let mut reals = [0.0; 12];
        for (r, s) in reals.iter_mut().zip(&fields[1..]) {
            *r = s.parse().map_err(|e| Error::Parse {
                line,
                message: format!("{s:?}: {e}"),
            })?;
        }
        let vector = |o: usize| {
            ComplexVector3(std::array::from_fn(|i| {
                Complex::new(reals[o + 2 * i], reals[o + 2 * i + 1])
            }))
        };
        traces.push(EmField {
            e: vector(0),
            h: vector(6),
        });
    }
    if traces.len() != mesh.nodes().len() {
        return Err(Error::LengthMismatch {
            expected: mesh.nodes().len(),
            found: traces.len(),
        });
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chiral::ChiralMedium;
    use crate::fields::{exact_chiral_solution, ChiralAmplitudes};
    use crate::geometry::SurfaceRule;
    use crate::quaternion::ONE;

    #[test]
    fn round_trip_is_exact() {
        let mesh = SurfaceMesh::icosphere(1.0, 1).unwrap().with_rule(SurfaceRule::ThreePoint);
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.25).unwrap();
        let traces = exact_chiral_solution(&m, ChiralAmplitudes::default()).traces(&mesh);
        let mut buf = Vec::new();
        write_traces_csv(&mesh, &traces, &mut buf).unwrap();
        let back = read_traces_csv(&mesh, &buf[..]).unwrap();
        assert_eq!(back, traces);
    }

    #[test]
    fn mismatched_rows_are_rejected() {
        let mesh = SurfaceMesh::icosphere(1.0, 0).unwrap();
        let row = "3,0,0,0,0,0,0,0,0,0,0,0,0";
        let text = format!("{TRACE_CSV_HEADER}\n{row}\n");
        assert!(matches!(
            read_traces_csv(&mesh, text.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        let text = format!("{TRACE_CSV_HEADER}\n0,0,0,0,0,0,0,0,0,0,0,0,0\n");
        assert!(matches!(
            read_traces_csv(&mesh, text.as_bytes()),
            Err(Error::LengthMismatch { expected: 20, found: 1 })
        ));
    }
}
