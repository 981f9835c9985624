#include "helix/reads.hpp"

#include "helix/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace helix {
namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string strip_whitespace(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(c);
        }
    }
    return out;
}

// Upper-cases in place and rejects anything outside ACGT.
void normalize_sequence(Read& read)
{
    for (std::size_t offset = 0; offset < read.sequence.size(); ++offset) {
        char& c = read.sequence[offset];
        const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (up != 'A' && up != 'C' && up != 'G' && up != 'T') {
            throw ValidationError("read " + std::to_string(read.index) + " (" + read.label
                                  + "): invalid character '" + std::string(1, c) + "' at offset "
                                  + std::to_string(offset));
        }
        c = up;
    }
}

std::vector<std::pair<int, std::string_view>> split_lines(std::string_view text)
{
    std::vector<std::pair<int, std::string_view>> lines;
    int number = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.emplace_back(number++, line);
        if (end == text.size()) {
            break;
        }
        start = end + 1;
    }
    return lines;
}

std::vector<Read> parse_fasta(std::string_view text, const std::string& source)
{
    std::vector<Read> reads;
    int header_line = 0;
    for (const auto& [number, raw] : split_lines(text)) {
        const std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '>') {
            if (!reads.empty() && reads.back().sequence.empty()) {
                throw ParseError(source, header_line, "FASTA record '" + reads.back().label + "' has no sequence");
            }
            std::string_view label = trim(line.substr(1));
            if (label.empty()) {
                throw ParseError(source, number, "malformed FASTA header: empty identifier");
            }
            Read read;
            read.index = static_cast<int>(reads.size());
            read.label = std::string(label);
            reads.push_back(std::move(read));
            header_line = number;
        } else {
            if (reads.empty()) {
                throw ParseError(source, number, "malformed FASTA: sequence data before the first '>' header");
            }
            reads.back().sequence += strip_whitespace(line);
        }
    }
    if (!reads.empty() && reads.back().sequence.empty()) {
        throw ParseError(source, header_line, "FASTA record '" + reads.back().label + "' has no sequence");
    }
    return reads;
}

std::vector<Read> parse_plain(std::string_view text)
{
    std::vector<Read> reads;
    for (const auto& [number, raw] : split_lines(text)) {
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        Read read;
        read.index = static_cast<int>(reads.size());
        read.label = "read_" + std::to_string(read.index);
        read.sequence = strip_whitespace(line);
        reads.push_back(std::move(read));
    }
    return reads;
}

ReadFormat sniff(std::string_view text)
{
    for (const auto& [number, raw] : split_lines(text)) {
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        return line.front() == '>' ? ReadFormat::fasta : ReadFormat::plain_lines;
    }
    return ReadFormat::plain_lines;
}

ReadSet make_fixture(std::string name, std::initializer_list<const char*> sequences)
{
    ReadSet set;
    set.source = "fixture:" + name;
    int i = 0;
    for (const char* seq : sequences) {
        set.reads.push_back(Read{i, name + "_r" + std::to_string(i), seq});
        ++i;
    }
    return set;
}

} // namespace

ReadSet parse_reads(std::string_view text, const std::string& source, LoadOptions options)
{
    if (trim(text).empty()) {
        throw ValidationError(source + ": no reads (empty input)");
    }
    const ReadFormat format = options.format == ReadFormat::automatic ? sniff(text) : options.format;

    ReadSet set;
    set.source = source;
    set.reads = format == ReadFormat::fasta ? parse_fasta(text, source) : parse_plain(text);
    if (set.reads.empty()) {
        throw ValidationError(source + ": no reads (only comments or blank lines)");
    }
    for (Read& read : set.reads) {
        normalize_sequence(read);
    }

    if (options.deduplicate) {
        std::set<std::pair<std::string, std::string>> seen;
        std::vector<Read> kept;
        for (Read& read : set.reads) {
            if (seen.emplace(read.label, read.sequence).second) {
                read.index = static_cast<int>(kept.size());
                kept.push_back(std::move(read));
            }
        }
        set.reads = std::move(kept);
    }
    return set;
}

ReadSet load_reads(const std::filesystem::path& path, LoadOptions options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open read file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_reads(buffer.str(), path.string(), options);
}

std::string write_reads(const ReadSet& reads, ReadFormat format)
{
    std::string out;
    for (const Read& read : reads.reads) {
        if (format == ReadFormat::plain_lines) {
            out += read.sequence;
            out += '\n';
        } else {
            out += '>';
            out += read.label;
            out += '\n';
            out += read.sequence;
            out += '\n';
        }
    }
    return out;
}

void validate(const ReadSet& reads)
{
    if (reads.size() < 2) {
        throw ValidationError("a read set needs at least 2 reads, got " + std::to_string(reads.size()));
    }
    for (int i = 0; i < reads.size(); ++i) {
        const Read& r = reads[i];
        if (r.index != i) {
            throw ValidationError("read indices must be 0..N-1 in order; found " + std::to_string(r.index)
                                  + " at position " + std::to_string(i));
        }
        if (r.sequence.empty()) {
            throw ValidationError("read " + std::to_string(i) + " has an empty sequence");
        }
        const auto bad = r.sequence.find_first_not_of("ACGT");
        if (bad != std::string::npos) {
            throw ValidationError("read " + std::to_string(i) + ": invalid character at offset " + std::to_string(bad));
        }
    }
}

ReadFormat parse_read_format(std::string_view name)
{
    if (name == "auto") {
        return ReadFormat::automatic;
    }
    if (name == "fasta") {
        return ReadFormat::fasta;
    }
    if (name == "plain" || name == "plain-lines" || name == "lines") {
        return ReadFormat::plain_lines;
    }
    throw ConfigError("unknown read format '" + std::string(name) + "' (expected auto, fasta or plain-lines)");
}

std::vector<std::string> fixture_names()
{
    return {"cyclic4", "mito4", "mito5", "mito6", "sarscov2_5"};
}

std::filesystem::path data_directory()
{
    if (const char* env = std::getenv("HELIX_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
#ifdef HELIX_DATA_DIR
    return HELIX_DATA_DIR;
#else
    return "data";
#endif
}

ReadSet builtin_fixture(std::string_view name)
{
    if (name == "cyclic4") {
        return make_fixture("cyclic4", {"ATCGATCG", "CGATCGAT", "TCGATCGA", "GATCGATC"});
    }
    // Human mitochondrion (NC_012920.1) fragments.
    if (name == "mito4") {
        return make_fixture("mito4", {"ATGGCGTGCA", "GCGTGCAATG", "TGCAATGGCG", "AATGGCGTGC"});
    }
    if (name == "mito5") {
        return make_fixture("mito5", {"ATGACCAACAACCTC", "AACAACCTCGGGCCC", "CTCGGGCCCTGACGC",
                                      "CCCTGACGCCTACGC", "GCCTACGCTCCTGGC"});
    }
    if (name == "mito6") {
        return make_fixture("mito6", {"AGTGAAATTGACCTGCCCGTGAAGA", "CTGCCCGTGAAGAGGCGGGCATAAC",
                                      "CGGGCATAACACAGCAAGACGAGAA", "ACAGCAAGACGAGAAGACCCTATGG",
                                      "AAGACCCTATGGAGCTTTAATTTAT", "TTTAATTTATTAATGCAAACAGTAC"});
    }
    if (name == "sarscov2_5") {
        const auto path = data_directory() / "sarscov2_5.fasta";
        if (!std::filesystem::exists(path)) {
            throw IoError("fixture sarscov2_5 needs the bundled file " + path.string());
        }
        ReadSet set = load_reads(path, {ReadFormat::fasta, false});
        set.source = "fixture:sarscov2_5";
        return set;
    }
    std::string valid;
    for (const auto& n : fixture_names()) {
        valid += (valid.empty() ? "" : ", ") + n;
    }
    throw NotFoundError("unknown fixture '" + std::string(name) + "'; valid fixtures: " + valid);
}

} // namespace helix
