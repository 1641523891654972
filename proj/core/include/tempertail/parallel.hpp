#pragma once

#include <cstddef>
#include <functional>

namespace tempertail {

/// Draws are generated in fixed-size chunks; chunk c of a batch always uses
/// substream c, so results do not depend on the number of worker threads.
inline constexpr std::size_t kChunkSize = 8192;

/// Worker count: hardware concurrency, capped by TEMPERTAIL_THREADS if set.
unsigned worker_count();

/// Run body(chunk_index, begin, end) over [0, n) split into kChunkSize chunks.
void for_each_chunk(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace tempertail
