#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace helix {

struct Read {
    int index = 0;
    std::string label;
    std::string sequence;
};

struct ReadSet {
    std::vector<Read> reads;
    std::string source;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(reads.size()); }
    [[nodiscard]] const Read& operator[](int i) const { return reads.at(static_cast<std::size_t>(i)); }
};

enum class ReadFormat { automatic, fasta, plain_lines };

struct LoadOptions {
    ReadFormat format = ReadFormat::automatic;
    bool deduplicate = false;
};

/// Parses reads from an in-memory buffer. `source` is used in error messages
/// and recorded as provenance.
ReadSet parse_reads(std::string_view text, const std::string& source, LoadOptions options = {});

ReadSet load_reads(const std::filesystem::path& path, LoadOptions options = {});

/// Serializes in the requested format. Plain-lines output drops labels; they are
/// regenerated as "read_<index>" on load.
std::string write_reads(const ReadSet& reads, ReadFormat format);

/// Throws ValidationError unless the set has at least two reads, contiguous
/// indices and only A/C/G/T.
void validate(const ReadSet& reads);

ReadFormat parse_read_format(std::string_view name);

std::vector<std::string> fixture_names();

/// The read sets used in the experiments. `sarscov2_5` is read from the bundled
/// data directory (override with HELIX_DATA_DIR).
ReadSet builtin_fixture(std::string_view name);

std::filesystem::path data_directory();

} // namespace helix
