// nonrecip: run a simulation described by a JSON config.
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nonrecip/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nonreciprocal sympathetic cooling simulator"};
  nonrecip::CliOptions opt;
  std::string out;
  app.add_option("--config", opt.config_path, "JSON run configuration")->required();
  app.add_option("--override", opt.overrides, "key.path=value, value parsed as JSON when possible")
      ->take_all()
      ->expected(1);
  app.add_option("--out", out, "output path, replaces output_path from the config");
  app.add_flag("--quiet", opt.quiet, "suppress progress output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", {{"code", "usage"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  }
  if (!out.empty()) opt.out = out;
  return nonrecip::run(opt);
}
