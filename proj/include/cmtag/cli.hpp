#pragma once

namespace cmtag {

// Entry point behind the cmtag binary; callable in-process for tests.
// Returns 0 on success, 1 on usage errors, 2 on data errors.
int cli_main(int argc, const char* const* argv);

}  // namespace cmtag
