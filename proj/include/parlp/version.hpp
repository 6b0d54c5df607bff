#pragma once

#define PARLP_VERSION_MAJOR 0
#define PARLP_VERSION_MINOR 1
#define PARLP_VERSION_PATCH 0
#define PARLP_VERSION_STRING "0.1.0"
