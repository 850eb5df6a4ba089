#ifndef SOFTSKILL_LOG_H_
#define SOFTSKILL_LOG_H_

#include <string_view>

namespace softskill {

// Process-wide switch for warning/info messages on stderr.
void set_quiet(bool quiet);
bool is_quiet();

void log_warning(std::string_view message);
void log_info(std::string_view message);

}  // namespace softskill

#endif  // SOFTSKILL_LOG_H_
