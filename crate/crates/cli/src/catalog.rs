//! Bundled worked examples with the digests of their text reports.

use crate::job::{parse_job, JobSpec};
use crate::run::{run, RunOptions};

pub struct CatalogEntry {
    pub name: &'static str,
    pub input: &'static str,
    /// SHA-256 of the text report.
    pub digest: &'static str,
}

impl CatalogEntry {
    pub fn job(&self) -> JobSpec {
        parse_job(self.input).expect("catalog inputs parse")
    }
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "a4-local",
        input: "[pic-local]\np = 2\nP = [1,1]\nE = [[[0,1],[1,1]]]\n",
        digest: "03b78f1bbe6d96288b043295410e58fed2aa684aea64787fd80d5d68972f255c",
    },
    CatalogEntry {
        name: "a4-kleinfour",
        input: "[pic-kleinfour]\ncase = A4\n",
        digest: "da3c51e602da4cf89e52c9423d2030d59d6bd514edd23a49ce271523fc2bb2e0",
    },
    CatalogEntry {
        name: "a5-principal",
        input: "[pic-kleinfour]\ncase = A5_principal\n",
        digest: "5c03f73d2aaef67952bdfc3b4ff0c1e04a3b0b8787aa27d3d35edd2aad555b1d",
    },
    CatalogEntry {
        name: "kleinfour-nilpotent",
        input: "[pic-nilpotent]\np = 2\nP = [1,1]\nm = 1\n",
        digest: "b8ff745481604c884c4c47a613f03b2719ae9be0cc3fed3a9f6f73ccc70d8058",
    },
    CatalogEntry {
        name: "c2-nilpotent",
        input: "[pic-nilpotent]\np = 2\nP = [1]\n",
        digest: "33bd23f5cccd7dd58439906a5150a1132943a0fde679aed9d317d8f82dfa622b",
    },
    CatalogEntry {
        name: "c9-cyclic-inversion",
        input: "[pic-cyclic]\np = 3\nP = [2]\nE = [[[8]]]\nd = 2\n",
        digest: "91609cf80ed27ef5f53791bc3c95438559a2b692d6d68cffe7da272968d6520c",
    },
    CatalogEntry {
        name: "c9-cyclic-order-six",
        input: "[pic-cyclic]\np = 3\nP = [2]\nE = [[[2]]]\nd = 1\n",
        digest: "b2b88fab9d24b07fad173deb1e9cd5294460a12c07b0b5e8d039b71a92ee9fdb",
    },
    CatalogEntry {
        name: "c9-fusion",
        input: "[fusion]\np = 3\nP = [2]\nE = [[[8]]]\n",
        digest: "2cd78b08fe292fcb99527d22ac95636fd39a944de4b7218ac5e3e3dbaf39afb1",
    },
    CatalogEntry {
        name: "kleinfour-frobenius",
        input: "[pic-frobenius]\np = 2\nP = [1,1]\nE = [[[0,1],[1,1]]]\n",
        digest: "6ed70beb0bd8a0776508e58582b92f18b459d33f7177bc125fc3f41f41811ad4",
    },
    CatalogEntry {
        name: "kleinfour-aut",
        input: "[aut]\np = 2\nP = [1,1]\n",
        digest: "dafdb6d28ef96427e784c600084137d38f0b5b60913a4b44f30c05f6a13c16a2",
    },
    CatalogEntry {
        name: "z3-inversion-dade",
        input: "[dade]\ntorsion = [3]\naction = [[[2]]]\nv = [1]\n",
        digest: "c5d17ada6815e3b9fabb1e0faec7c45eeddf8f31f7d58f44edf2999f17ac9c1f",
    },
    CatalogEntry {
        name: "star-three",
        input: "[tree]\nvertices = (1 2 3); (1); (2); (3)\npi = [2,3,1]\nn = 2\n",
        digest: "6a91a0d41973ee68ffc958d762d3b94e93bc5c58af6a6f2aeffa6fcdbc7f0f87",
    },
    CatalogEntry {
        name: "path-two",
        input: "[tree]\nvertices = (1); (1 2); (2)\n",
        digest: "1b2eb75ee5600934e37655261453926e3974d7e70bd62d99b8969b9ffe28f3ac",
    },
    CatalogEntry {
        name: "a4-diagram",
        input: "[verify]\np = 2\nP = [1,1]\nE = [[[0,1],[1,1]]]\n",
        digest: "f4a4df5e7219c17b8cb581d686170b9509c8ee88201992059e5290e0ba8ac5ac",
    },
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayLine {
    pub name: &'static str,
    pub digest: String,
    pub matches: bool,
}

/// Run every catalog entry and compare digests.
pub fn replay() -> Vec<ReplayLine> {
    CATALOG
        .iter()
        .map(|e| {
            let digest = match run(&e.job(), RunOptions::default()) {
                Ok(r) => r.digest(),
                Err(err) => format!("error: {err}"),
            };
            ReplayLine {
                name: e.name,
                matches: digest == e.digest,
                digest,
            }
        })
        .collect()
}

/// The `--check` output.
pub fn replay_text(lines: &[ReplayLine]) -> String {
    lines
        .iter()
        .map(|l| {
            let status = if l.matches { "ok" } else { "MISMATCH" };
            format!("{status} {} {}\n", l.name, l.digest)
        })
        .collect()
}
