// Renders jsonl measurement records as markdown comparison tables.
#include <fstream>
#include <iostream>

#include "cli_common.hpp"

using namespace mktorus;

int main(int argc, char** argv) {
    CLI::App app{"render report records as markdown tables"};
    std::string in, table = "all", out;
    app.add_option("--in", in, "jsonl report path")->required();
    app.add_option("--table", table, "t1..t6 or all")
        ->check(CLI::IsMember({"t1", "t2", "t3", "t4", "t5", "t6", "all"}));
    app.add_option("--out", out, "write markdown here instead of stdout");
    CLI11_PARSE(app, argc, argv);

    try {
        auto records = load_report(in);
        std::string md =
            table == "all" ? render_all(records) : render_table(table, records);
        if (out.empty()) {
            std::cout << md;
        } else {
            std::ofstream f(out);
            if (!f) throw std::runtime_error("cannot write " + out);
            f << md;
        }
    } catch (const std::exception& e) {
        std::cerr << "mk-report: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
