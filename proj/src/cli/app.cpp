// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <ostream>

#include "cli_internal.hpp"
#include "polariton/errors.hpp"

namespace polariton::cli {
namespace {

using Handler = int (*)(const std::vector<std::string>&, const Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"synth", cmd_synth},     {"extract", cmd_extract}, {"fit", cmd_fit},       {"couple", cmd_couple},
      {"predict", cmd_predict}, {"magic", cmd_magic},     {"report", cmd_report},
  };
  return table;
}

void usage(std::ostream& os) {
  os << "usage: polariton <command> [options]\n"
        "commands: synth, extract, fit, couple, predict, magic, report\n"
        "run 'polariton <command> --help' for the options of one command\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  if (args.empty()) {
    usage(err);
    return kExitUsage;
  }
  const std::string& command = args.front();
  if (command == "--help" || command == "-h" || command == "help") {
    usage(out);
    return kExitOk;
  }
  const auto it = handlers().find(command);
  if (it == handlers().end()) {
    err << "error: unknown command '" << command << "'\n";
    usage(err);
    return kExitUsage;
  }
  const Context ctx{out, err};
  const std::vector<std::string> user(args.begin() + 1, args.end());
  try {
    return it->second(layered_tokens(command, user, env), ctx);
  } catch (const HelpRequested& help) {
    out << help.text;
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace polariton::cli
