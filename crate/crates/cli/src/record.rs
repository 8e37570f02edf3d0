use std::fmt::Display;
use std::time::Instant;

use matching_ekr::Error;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub k: Option<usize>,
    pub n: Option<usize>,
}

impl Params {
    pub fn k(k: usize) -> Params {
        Params { k: Some(k), n: None }
    }

    pub fn n(n: usize) -> Params {
        Params { k: None, n: Some(n) }
    }

    pub fn nk(n: usize, k: usize) -> Params {
        Params { k: Some(k), n: Some(n) }
    }
}

/// One checked claim. `status` is `pass` exactly when `expected == computed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub claim: String,
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    /// `None` unless timings were requested, so reports stay byte-stable.
    pub elapsed_ms: Option<u64>,
}

impl VerificationRecord {
    pub fn check(claim: &str, p: Params, expected: impl Display, computed: impl Display) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let status = if expected == computed { Status::Pass } else { Status::Fail };
        VerificationRecord { claim: claim.into(), k: p.k, n: p.n, expected, computed, status, elapsed_ms: None }
    }

    pub fn skipped(claim: &str, p: Params, reason: impl Display) -> Self {
        VerificationRecord {
            claim: claim.into(),
            k: p.k,
            n: p.n,
            expected: String::new(),
            computed: reason.to_string(),
            status: Status::Skipped,
            elapsed_ms: None,
        }
    }

    /// A library cap becomes a skip; anything else is a failed claim.
    pub fn error(claim: &str, p: Params, e: &Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Self::skipped(claim, p, e),
            _ => VerificationRecord {
                claim: claim.into(),
                k: p.k,
                n: p.n,
                expected: String::new(),
                computed: format!("error: {e}"),
                status: Status::Fail,
                elapsed_ms: None,
            },
        }
    }

    pub fn attempt<E: Display, C: Display>(
        claim: &str,
        p: Params,
        expected: Result<E, Error>,
        computed: Result<C, Error>,
    ) -> Self {
        match (expected, computed) {
            (Ok(e), Ok(c)) => Self::check(claim, p, e, c),
            (Err(e), _) | (_, Err(e)) => Self::error(claim, p, &e),
        }
    }
}

/// Collects records in call order, stamping elapsed time per group when asked.
pub struct Report {
    timings: bool,
    pub records: Vec<VerificationRecord>,
}

impl Report {
    pub fn new(timings: bool) -> Report {
        Report { timings, records: Vec::new() }
    }

    pub fn group(&mut self, f: impl FnOnce() -> Vec<VerificationRecord>) {
        let start = Instant::now();
        let mut batch = f();
        if self.timings {
            let ms = start.elapsed().as_millis() as u64;
            for r in &mut batch {
                r.elapsed_ms = Some(ms);
            }
        }
        self.records.extend(batch);
    }

    pub fn has_failures(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }
}
