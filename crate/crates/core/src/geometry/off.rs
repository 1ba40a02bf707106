//! ASCII OFF import/export.

use std::io::{BufRead, Write};

use super::{Point, SurfaceMesh, SurfaceRule};
use crate::error::{Error, Result};

impl SurfaceMesh {
    pub fn write_off<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "OFF")?;
        writeln!(out, "{} {} 0", self.vertices().len(), self.triangle_count())?;
        for v in self.vertices() {
            writeln!(out, "{} {} {}", v[0], v[1], v[2])?;
        }
        for t in self.triangles() {
            writeln!(out, "3 {} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }

    /// Reads a triangle-only OFF file. Vertex order defines the normal by the
    /// right-hand rule.
    pub fn read_off<R: BufRead>(input: R, rule: SurfaceRule) -> Result<Self> {
        let mut lines = input
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter_map(|(i, l)| match l {
                Ok(l) => {
                    let body = l.split('#').next().unwrap_or("").trim().to_string();
                    (!body.is_empty()).then_some(Ok((i, body)))
                }
                Err(e) => Some(Err(Error::from(e))),
            });
        let mut next = |what: &str| -> Result<(usize, String)> {
            lines.next().unwrap_or_else(|| {
                Err(Error::Parse {
                    line: 0,
                    message: format!("unexpected end of file, expected {what}"),
                })
            })
        };

        let (line, header) = next("OFF header")?;
        // The counts may share the header line.
        let counts_text = match header.strip_prefix("OFF") {
            Some(rest) if !rest.trim().is_empty() => rest.trim().to_string(),
            Some(_) => next("element counts")?.1,
            None => {
                return Err(Error::Parse {
                    line,
                    message: "missing OFF header".into(),
                })
            }
        };
        let counts = parse_numbers::<usize>(&counts_text, line)?;
        if counts.len() < 2 {
            return Err(Error::Parse {
                line,
                message: "expected vertex and face counts".into(),
            });
        }
        let (nv, nf) = (counts[0], counts[1]);

        let mut vertices: Vec<Point> = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (line, text) = next("vertex")?;
            let v = parse_numbers::<f64>(&text, line)?;
            if v.len() < 3 {
                return Err(Error::Parse {
                    line,
                    message: "vertex needs three coordinates".into(),
                });
            }
            vertices.push([v[0], v[1], v[2]]);
        }
        let mut triangles = Vec::with_capacity(nf);
        for _ in 0..nf {
            let (line, text) = next("face")?;
            let f = parse_numbers::<usize>(&text, line)?;
            if f.first() != Some(&3) || f.len() < 4 {
                return Err(Error::Parse {
                    line,
                    message: "only triangular faces are supported".into(),
                });
            }
            triangles.push([f[1], f[2], f[3]]);
        }
        SurfaceMesh::from_parts(vertices, triangles, rule)
    }
}

fn parse_numbers<T: std::str::FromStr>(text: &str, line: usize) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split_whitespace()
        .map(|s| {
            s.parse::<T>().map_err(|e| Error::Parse {
                line,
                message: format!("{s:?}: {e}"),
            })
        })
        .collect()
}
