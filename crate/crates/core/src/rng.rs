use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Serve-side randomness carried inside the game state.
///
/// The canonical byte form is `seed (32) || word position (16, LE) || stream (8, LE)`,
/// which pins the generator exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngState(ChaCha8Rng);

const SEED_LEN: usize = 32;
pub const RNG_STATE_LEN: usize = SEED_LEN + 16 + 8;

impl RngState {
    pub fn seeded(seed: u64) -> Self {
        RngState(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(RNG_STATE_LEN);
        out.extend_from_slice(&self.0.get_seed());
        out.extend_from_slice(&self.0.get_word_pos().to_le_bytes());
        out.extend_from_slice(&self.0.get_stream().to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        if bytes.len() != RNG_STATE_LEN {
            return None;
        }
        let seed: [u8; SEED_LEN] = bytes[..SEED_LEN].try_into().ok()?;
        let word_pos = u128::from_le_bytes(bytes[SEED_LEN..SEED_LEN + 16].try_into().ok()?);
        let stream = u64::from_le_bytes(bytes[SEED_LEN + 16..].try_into().ok()?);
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(stream);
        rng.set_word_pos(word_pos);
        Some(RngState(rng))
    }

    pub fn coin(&mut self) -> bool {
        self.0.random_bool(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bytes_pin_the_stream() {
        let mut a = RngState::seeded(7);
        for _ in 0..13 {
            a.coin();
        }
        let mut b = RngState::from_bytes(&a.to_bytes()).unwrap();
        assert_eq!(a, b);
        let xs: Vec<bool> = (0..64).map(|_| a.coin()).collect();
        let ys: Vec<bool> = (0..64).map(|_| b.coin()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn rejects_wrong_length() {
        assert!(RngState::from_bytes(&[0; 10]).is_none());
    }
}
