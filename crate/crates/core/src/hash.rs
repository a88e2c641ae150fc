//! Content hashes used to bind artifacts to each other.

use sha2::{Digest, Sha256};

/// Hex digest truncated to 16 characters; enough to tell artifacts apart.
pub fn short_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    hex::encode(&digest[..8])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_and_short() {
        let h = short_hash(b"abc");
        assert_eq!(h.len(), 16);
        assert_eq!(h, "ba7816bf8f01cfea");
        assert_ne!(h, short_hash(b"abd"));
    }
}
