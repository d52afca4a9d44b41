// Converts Retrosheet game-log files (GLyyyy.TXT) to the canonical CSV.
//
//   retrosheet_to_csv GL1901.TXT GL1902.TXT ... > gamelogs.csv
//
// Fields used (1-based): 1 date yyyymmdd, 2 game number, 4 visitor,
// 7 home, 10 visitor score, 11 home score. Game number 0 maps to ordinal 1;
// game number 3 (the rare tripleheader finale) is skipped with a warning.

#include "rare/domain.hpp"
#include "rare/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split_quoted(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: retrosheet_to_csv GLyyyy.TXT...\n";
        return 1;
    }
    std::vector<rare::GameRecord> records;
    int skipped = 0;
    for (int a = 1; a < argc; ++a) {
        std::ifstream in(argv[a]);
        if (!in) {
            std::cerr << "cannot open " << argv[a] << '\n';
            return 2;
        }
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto f = split_quoted(line);
            try {
                if (f.size() < 11) throw std::runtime_error("too few fields");
                const std::string& d = f[0];
                if (d.size() != 8) throw std::runtime_error("bad date");
                rare::GameRecord g;
                g.date = {std::stoi(d.substr(0, 4)), std::stoi(d.substr(4, 2)),
                          std::stoi(d.substr(6, 2))};
                const int num = std::stoi(f[1]);
                if (num == 3) {
                    std::cerr << "warning: " << argv[a] << ":" << lineno
                              << ": third game of a day skipped\n";
                    ++skipped;
                    continue;
                }
                g.day_game_ordinal = num == 2 ? 2 : 1;
                g.away_team = f[3];
                g.home_team = f[6];
                g.away_runs = std::stoi(f[9]);
                g.home_runs = std::stoi(f[10]);
                if (auto why = rare::check_invariants(g)) throw std::runtime_error(*why);
                records.push_back(g);
            } catch (const std::exception& e) {
                std::cerr << "warning: " << argv[a] << ":" << lineno << ": " << e.what() << '\n';
                ++skipped;
            }
        }
    }
    std::sort(records.begin(), records.end(), rare::game_order_less);
    rare::write_game_log(std::cout, records);
    std::cerr << records.size() << " games written, " << skipped << " lines skipped\n";
    return 0;
}
