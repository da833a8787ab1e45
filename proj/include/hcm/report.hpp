#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace hcm {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { Csv, Json };

struct RunConfig {
    int d = 3;
    std::size_t g_min = 1;
    std::size_t g_max = 1;
    int max_degree = 6;
    std::size_t max_length = 4;
    std::size_t jobs = 1;
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 42;
    int index = 1;           // i of the characteristic-class relation
    std::string table_path;  // Out(F_n) homology table, JSON

    // Keys: d, g ("2" or "2..4"), maxdeg, maxlen, jobs, format (csv|json), seed, i,
    // table. Throws ValidationError on an unknown key or a malformed value.
    void set(std::string_view key, std::string_view value);
    // Throws ValidationError unless d >= 3, 1 <= g_min <= g_max and truncations are positive.
    void validate() const;
    // The settings that affect results (not jobs or format), for table metadata.
    [[nodiscard]] std::string describe() const;
};

// Merges "key = value" lines into base; '#' starts a comment.
[[nodiscard]] RunConfig parse_config(std::string_view text, RunConfig base = {});

struct ResultTable {
    std::string command;
    std::vector<std::pair<std::string, std::string>> metadata;  // in emission order
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Throws std::logic_error when the width does not match the columns.
    void add_row(std::vector<std::string> row);
    [[nodiscard]] std::string metadata_value(std::string_view key) const;  // "" if absent
    // Metadata as "# key: value" lines, then the header and the rows.
    [[nodiscard]] std::string to_csv() const;
    // {"command", "metadata", "columns", "rows"}; integer cells become numbers.
    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::string render(OutputFormat format) const;
};

// dims, ce, ss, invariants, stable-ring, stability, genus, selftest.
[[nodiscard]] const std::vector<std::string>& command_names();
// Column documentation for --help.
[[nodiscard]] std::string command_help(std::string_view command);
// Throws ValidationError for an unknown command or invalid config, and lets
// UnstableRangeError and DivergenceError through unchanged.
[[nodiscard]] ResultTable run(std::string_view command, const RunConfig& config);
// True when every row of a selftest table passed.
[[nodiscard]] bool selftest_passed(const ResultTable& table);

// job(0), ..., job(count - 1) on at most width threads, results in index order. The
// first exception thrown by a job is rethrown after all threads finish.
template <class Result>
std::vector<Result> parallel_map(std::size_t count, std::size_t width,
                                 const std::function<Result(std::size_t)>& job) {
    std::vector<Result> out(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = job(i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(width, count));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace hcm
