namespace cloak {}
