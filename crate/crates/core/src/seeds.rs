//! Seed fan-out. One user-facing seed drives every stochastic component
//! through labeled sub-streams, so each stage is independently reproducible.

/// Derives a stage-specific seed from the run seed and a stream label.
pub fn sub_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, folded into the seed, then splitmix64 finalized.
    let mut h = 0xcbf29ce484222325u64;
    for &b in label.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
