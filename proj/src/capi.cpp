extern "C" int fh_stub(void){return 0;}
