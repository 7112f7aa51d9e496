/* Loads fine yet exports none of the required entry points. */

static const int placeholder = 0;
