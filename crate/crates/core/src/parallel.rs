//! Internal thread pool. The `HYPERREC_THREADS` environment variable caps
//! the number of worker threads; it is read once, at first use.

use std::sync::OnceLock;

use rayon::ThreadPool;

static POOL: OnceLock<ThreadPool> = OnceLock::new();

pub fn pool() -> &'static ThreadPool {
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("HYPERREC_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n >= 1)
        {
            builder = builder.num_threads(n);
        }
        builder.build().expect("thread pool construction failed")
    })
}
