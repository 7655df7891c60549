//! Line-oriented run traces.
//!
//! ```text
//! t,fx,fy,swapped,phi
//! 0,3,5,1,7.250000
//! d,4,2,+1
//! d,4,0,-1
//! ```
//!
//! Every iteration produces one `t,fx,fy,swapped,phi` line (`swapped` is
//! `0`/`1`, `phi` is the potential after the update). Full traces follow each
//! such line with one `d,i,j,+1|-1` line per count change.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::algorithm::Trace;
use crate::error::{Error, Result};

pub const TRACE_HEADER: &str = "t,fx,fy,swapped,phi";

pub fn write_trace<W: Write>(trace: &Trace, out: &mut W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    match trace {
        Trace::Summary(rows) => {
            for s in rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    s.t, s.fx, s.fy, s.swapped as u8, s.phi
                )?;
            }
        }
        Trace::Full(records) => {
            for rec in records {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    rec.t, rec.fx, rec.fy, rec.swapped as u8, rec.phi
                )?;
                for d in &rec.delta {
                    writeln!(out, "d,{},{},{:+}", d.position, d.value, d.change)?;
                }
            }
        }
    }
    Ok(())
}

pub fn write_trace_file(trace: &Trace, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_trace(trace, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}
