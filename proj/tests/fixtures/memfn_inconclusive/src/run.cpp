JNIEXPORT void JNICALL Java_Gate_nativeRun(JNIEnv *env, jclass cls, jobject data) {
    Frame *frame = env->GetDirectBufferAddress(data);
    char *src = frame->bytes;
    int len = frame->length;
    memcpy(getBuf(), src, len);
}
