#pragma once

#define SEMCELL_VERSION "1.0.0"
