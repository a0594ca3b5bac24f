//! Optional external qepcad invocation.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::QeError;

/// Environment variable naming the qepcad executable.
pub const RUNNER_ENV: &str = "TREEPROB_QEPCAD";

pub fn configured_runner() -> Option<String> {
    std::env::var(RUNNER_ENV).ok().filter(|s| !s.trim().is_empty())
}

/// Extracts the formula after qepcad's "An equivalent quantifier-free formula:" banner.
pub fn extract_answer(output: &str) -> Option<String> {
    let mut lines = output.lines();
    lines.find(|l| l.contains("equivalent quantifier-free formula"))?;
    lines.map(str::trim).find(|l| !l.is_empty()).map(str::to_string)
}

/// Feeds `input` to `program` on stdin and returns the extracted answer.
pub fn run_qepcad(program: &str, input: &str, timeout: Duration) -> Result<String, QeError> {
    let mut child = Command::new(program)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| QeError::Runner(format!("{program}: {e}")))?;
    child
        .stdin
        .take()
        .expect("piped stdin")
        .write_all(input.as_bytes())
        .map_err(|e| QeError::Runner(e.to_string()))?;
    let start = Instant::now();
    loop {
        match child.try_wait().map_err(|e| QeError::Runner(e.to_string()))? {
            Some(_) => break,
            None if start.elapsed() > timeout => {
                let _ = child.kill();
                return Err(QeError::Runner(format!("timed out after {}s", timeout.as_secs())));
            }
            None => std::thread::sleep(Duration::from_millis(20)),
        }
    }
    let mut out = String::new();
    child
        .stdout
        .take()
        .expect("piped stdout")
        .read_to_string(&mut out)
        .map_err(|e| QeError::Runner(e.to_string()))?;
    extract_answer(&out).ok_or_else(|| QeError::Runner("no quantifier-free formula in output".into()))
}
