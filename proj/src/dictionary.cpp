#include "fuzzdict/dictionary.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <tuple>

namespace fuzzdict {

namespace {

bool valid_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

bool is_hex(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
}

std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::string validate_entry(const DictionaryEntry& entry) {
    if (entry.value.empty()) return "value is empty";
    if (entry.value.size() > 128) return "value exceeds 128 bytes";
    if (entry.name) {
        if (entry.name->empty()) return "name is empty";
        if (entry.name->size() > 64) return "name exceeds 64 characters";
        for (char c : *entry.name)
            if (!valid_name_char(c)) return "name contains invalid character";
    }
    if (entry.level && !entry.name) return "level requires a name";
    return {};
}

std::string escape_value(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size() + 8);
    for (char c : bytes) {
        uint8_t b = static_cast<uint8_t>(c);
        if (b == 0x5C) out += "\\\\";
        else if (b == 0x22) out += "\\\"";
        else if (b < 0x20 || b > 0x7E) {
            char buf[5];
            std::snprintf(buf, sizeof buf, "\\x%02X", b);
            out += buf;
        } else out.push_back(c);
    }
    return out;
}

std::string render_entry(const DictionaryEntry& entry) {
    std::string err = validate_entry(entry);
    if (!err.empty()) throw std::invalid_argument("invalid dictionary entry: " + err);
    std::string line;
    if (entry.name) {
        line += *entry.name;
        if (entry.level) {
            line += '@';
            line += std::to_string(*entry.level);
        }
        line += '=';
    }
    line += '"';
    line += escape_value(entry.value);
    line += '"';
    return line;
}

std::string write_dictionary(std::vector<DictionaryEntry> entries,
                             const WriteOptions& options) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const DictionaryEntry& a, const DictionaryEntry& b) {
                         const std::string empty;
                         const std::string& an = a.name ? *a.name : empty;
                         const std::string& bn = b.name ? *b.name : empty;
                         return std::tie(a.value, an) < std::tie(b.value, bn);
                     });
    // De-collide names after sorting so suffixes are deterministic.
    std::map<std::string, size_t> seen;
    for (auto& e : entries) {
        if (!e.name) continue;
        size_t& count = seen[*e.name];
        ++count;
        if (count > 1) *e.name += "_" + std::to_string(count);
    }

    char fp[17];
    std::snprintf(fp, sizeof fp, "%016llx",
                  static_cast<unsigned long long>(options.corpus_fingerprint));
    std::string out;
    out += "# " + options.tool_name + " dictionary\n";
    out += "# corpus files: " + std::to_string(options.corpus_files) +
           ", fingerprint: " + fp + "\n";
    out += "# entries: " + std::to_string(entries.size()) + "\n";
    for (const auto& e : entries) {
        out += render_entry(e);
        out += '\n';
    }
    return out;
}

ParsedDictionary parse_dictionary(std::string_view bytes, std::string_view origin) {
    ParsedDictionary out;
    std::string file(origin);
    uint32_t lineno = 0;
    size_t pos = 0;
    while (pos < bytes.size()) {
        size_t eol = bytes.find('\n', pos);
        if (eol == std::string_view::npos) eol = bytes.size();
        std::string_view raw_line = bytes.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        std::string_view line = trim(raw_line);
        if (line.empty() || line[0] == '#') continue;

        auto reject = [&](const char* why) {
            out.diagnostics.push_back({file, lineno, 1, why});
        };

        DictionaryEntry e;
        size_t i = 0;
        if (line[0] != '"') {
            size_t nb = 0;
            while (nb < line.size() && valid_name_char(line[nb])) ++nb;
            if (nb == 0 || nb > 64) {
                reject("malformed entry name");
                continue;
            }
            e.name = std::string(line.substr(0, nb));
            i = nb;
            if (i < line.size() && line[i] == '@') {
                ++i;
                uint64_t lvl = 0;
                size_t digits = 0;
                while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
                    lvl = lvl * 10 + static_cast<uint64_t>(line[i] - '0');
                    if (lvl > UINT32_MAX) break;
                    ++i;
                    ++digits;
                }
                if (digits == 0 || lvl > UINT32_MAX) {
                    reject("malformed entry level");
                    continue;
                }
                e.level = static_cast<uint32_t>(lvl);
            }
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i >= line.size() || line[i] != '=') {
                reject("expected '=' after entry name");
                continue;
            }
            ++i;
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        }
        if (i >= line.size() || line[i] != '"') {
            reject("expected quoted value");
            continue;
        }
        ++i;
        std::string value;
        bool closed = false, bad = false;
        while (i < line.size()) {
            char c = line[i];
            if (c == '"') {
                closed = true;
                ++i;
                break;
            }
            if (c == '\\') {
                ++i;
                if (i >= line.size()) { bad = true; break; }
                char esc = line[i];
                if (esc == '\\') { value.push_back('\\'); ++i; }
                else if (esc == '"') { value.push_back('"'); ++i; }
                else if (esc == 'x' && i + 2 < line.size() && is_hex(line[i + 1]) &&
                         is_hex(line[i + 2])) {
                    value.push_back(static_cast<char>(hex_val(line[i + 1]) * 16 +
                                                      hex_val(line[i + 2])));
                    i += 3;
                } else { bad = true; break; }
            } else {
                value.push_back(c);
                ++i;
            }
        }
        if (bad || !closed) {
            reject("malformed escaped value");
            continue;
        }
        if (!trim(line.substr(i)).empty()) {
            reject("trailing characters after value");
            continue;
        }
        e.value = std::move(value);
        std::string err = validate_entry(e);
        if (!err.empty()) {
            reject("invalid entry");
            continue;
        }
        out.entries.push_back(std::move(e));
        out.lines.push_back(lineno);
    }
    return out;
}

} // namespace fuzzdict
