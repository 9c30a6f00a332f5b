//! Bundled reference codes with checksums of their transcriptions.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf2::{parse_code_file, CodeFile, LinearCode};

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    /// SHA-256 of `text`, hex.
    pub sha256: &'static str,
}

macro_rules! fixture {
    ($name:literal, $sha:literal) => {
        Fixture {
            name: $name,
            text: include_str!(concat!("../fixtures/", $name, ".txt")),
            sha256: $sha,
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("pair_basis_18_4", "8ab2286b7661719e1fbd24469565a30f6c3658249b2b08ecb659865a3f87d8dd"),
    fixture!("nondistinct_6_3", "fcd3d0067ba000ff7b4ac33c7cd2df33b8d35e50935b653f4583feef59e51e30"),
    fixture!("distinct_30_4", "68bc2709e052105f89a643aba11c459b57a4b7e94605487fa4e8ac4deb2e9241"),
    fixture!("small_6_5", "defcb73aca9aad36a391dde3c528d50bb9ef0ae28645cc39aca87c2e6ae1852b"),
    fixture!("small_9_5", "c1973c8f8466f70f4961b6aa8c6401492066b769e03c5080f76538a03fd4e396"),
    fixture!("small_12_5", "acab24bbf4e8faf8e43bcb782574b1fc392d3d086abeca2b6031bc51a9c6d192"),
    fixture!("reduction_15_5", "19c9e9bb5fbf8171164c8eda4da6909e1a949a3857322d56ef660886b790d253"),
    fixture!("hypothesis_a_21_8", "f9faf31365f2169f54f3e89e0c3418ce92cdbe03c0b823eedc900599e748d1a6"),
    fixture!("hypothesis_a_21_8_b", "403b0ed483c37235c38c7dd071171af540988ae34f8af327578338062b2db5b0"),
    fixture!("order3_18_6", "8fe73c7ff5f65372a13e654b1d3fab9f2098bf45084128001ed78c4cd39b89b8"),
    fixture!("order3_30_10", "0c8229d8a1a554d59bfd2a69f8ca4d4943b5114937646a7ac1c1ba9c19b7358d"),
    fixture!("order3_36_18", "354149494e68be688cc235c71f80aaff6c51bdf8c6d7dd0857380de3fde15f47"),
    fixture!("selfdual_30_15", "c9faf2eda3a58c08c9e2ef0021b5e6999283e9f82d6235b1e6bb559d53c20a79"),
    fixture!("selfdual_30_15_b", "e3a31d3ce1d32b13ce431c1c2d9c72362b409cb0599c54808b05bd49d95ab9fd"),
];

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn fixture(name: &str) -> Result<&'static Fixture> {
    FIXTURES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::Structure(format!("unknown fixture {name:?}")))
}

/// Parsed code of a bundled fixture.
pub fn fixture_code(name: &str) -> Result<LinearCode> {
    Ok(fixture(name)?.file()?.code())
}

impl Fixture {
    pub fn checksum_ok(&self) -> bool {
        sha256_hex(self.text) == self.sha256
    }

    pub fn file(&self) -> Result<CodeFile> {
        parse_code_file(self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksums_and_parse() {
        for f in FIXTURES {
            assert!(f.checksum_ok(), "{}", f.name);
            let file = f.file().unwrap();
            assert_eq!(file.n % 3, 0, "{}", f.name);
        }
        assert!(fixture("missing").is_err());
    }
}
