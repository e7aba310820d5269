//! Slack-based successor computation for primes, a gap bound derived from
//! it, twin-prime R-constraints, and the deterministic oracles and campaigns
//! used to check all three.
//!
//! ```
//! use slackprime::next_prime::next_prime_slack;
//!
//! let r = next_prime_slack(7).unwrap();
//! assert_eq!((r.e, r.successor, r.used_beyond_range), (4, 11, true));
//! ```

pub mod checkpoint;
pub mod emit;
pub mod error;
pub mod gaps;
pub mod harness;
pub mod next_prime;
pub mod oracle;
pub mod slack;
pub mod twin;

pub use error::{Error, Result};
