use std::io::{self, Write};

use super::{MetricsRecord, PlanLogRow, TrajectoryRecord};

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_metrics_csv<W: Write>(mut w: W, rows: &[MetricsRecord]) -> io::Result<()> {
    writeln!(w, "t,chi1,chi2,chi3,phi1,phi2")?;
    for r in rows {
        writeln!(w, "{:.4},{},{},{},{},{}", r.t, r.chi1, r.chi2, r.chi3, r.phi1, r.phi2)?;
    }
    Ok(())
}

pub fn write_plan_log_csv<W: Write>(mut w: W, rows: &[PlanLogRow]) -> io::Result<()> {
    writeln!(w, "cycle,time,agent,status,reason,passed,first_failures,wall_ms,snapshot")?;
    for r in rows {
        writeln!(
            w,
            "{},{:.4},{},{},{},{},{},{:.3},{}",
            r.cycle,
            r.time,
            r.agent,
            r.status,
            quote(&r.reason),
            r.passed,
            quote(&r.histogram),
            r.wall_ms,
            r.snapshot
        )?;
    }
    Ok(())
}

/// One JSON object per line.
pub fn write_trajectories_jsonl<W: Write>(mut w: W, rows: &[TrajectoryRecord]) -> io::Result<()> {
    for r in rows {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    Ok(())
}
